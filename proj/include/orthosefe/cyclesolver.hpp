#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthosefe/constraints.hpp"
#include "orthosefe/instance.hpp"
#include "orthosefe/naesat.hpp"

namespace orthosefe {

// One rewriting step. Vertices are tracked by name because every step builds
// a fresh instance with its own id space. `carry` maps every exclusive edge
// of the input instance to the output edge that inherits its side, so a
// feasible side assignment of the output pulls back to the input.
struct TransformStep {
  std::string rule;
  std::map<std::string, std::string> roles;
  std::map<NamePair, NamePair> carry;
};

struct Transformed {
  Instance instance;
  TransformStep step;
};

struct TransformationTrace {
  std::vector<Instance> states;      // states[0] = original, states[i+1] = after steps[i]
  std::vector<TransformStep> steps;
};

// Rewrite the lowest-id graph-0 vertex of degree four (two graph-0 exclusive
// edges) into a path gadget, lowering the graph-0 degree-four count by one.
// nullopt when graph 0 already has maximum degree three. Throws when the
// chosen vertex also carries two graph-1 exclusive edges (union degree six),
// which this rewriting cannot absorb.
std::optional<Transformed> reduce_degree_step(const Instance& in);

// Rewrite one alternating pair of graph-0 exclusive edges (the pair whose
// connecting cycle path is shortest, ties broken lexicographically) so the
// pair no longer alternates, strictly decreasing the number of alternating
// graph-0 pairs. Requires graph 0 of maximum degree three; nullopt when no
// graph-0 pair alternates.
std::optional<Transformed> outerplanarize_step(const Instance& in);

// Rewrite the lowest-id graph-0 degree-four vertex that is graph-0-adjacent
// to another degree-four vertex, strictly decreasing the count of such
// vertices. nullopt when none exists.
std::optional<Transformed> split_offending_step(const Instance& in);

// Pull a feasible side assignment of `next` (the result of `step` applied to
// `prev`) back to `prev` along the step's carry map.
SideAssignment pull_back(const Instance& prev, const TransformStep& step, const Instance& next,
                         const SideAssignment& a);

// Reduction of a cycle instance (k = 2, graph 0 of maximum degree three, no
// alternating graph-0 pairs) to not-all-equal satisfiability.
//
// Variables 1..C stand for the connected components of the alternation graph
// over graph-1 exclusive edges, ordered by smallest member edge; a variable
// is true iff the part holding the component's smallest edge lies Left.
// Components that are not two-colorable make the instance infeasible
// outright (feasible_precheck = false). One helper variable per graph-0 edge
// whose endpoints both carry exactly two graph-1 exclusive edges ties the
// two endpoint triggers together.
struct NaeReduction {
  bool feasible_precheck = true;
  NaeFormula formula;
  // components[c] lists the member edges of variable c+1 with their polarity
  // (true = literal +var, i.e. the part holding the smallest member).
  std::vector<std::vector<std::pair<Edge, bool>>> components;
  std::map<Edge, int> helper_var;  // qualifying graph-0 edge -> helper variable
};

NaeReduction reduce_to_nae(const Instance& in);

// Side assignment encoded by a satisfying assignment of the reduction's
// formula: graph-1 edges by component value, each graph-0 edge on the side
// forced by an endpoint where both graph-1 edges agree, Left otherwise.
SideAssignment decode_nae(const Instance& in, const NaeReduction& red,
                          const std::vector<bool>& assignment);

struct CycleSolution {
  Verdict verdict;  // on the original instance; witness included when feasible
  TransformationTrace trace;
  NaeReduction reduction;
  std::optional<std::vector<bool>> nae_assignment;
};

// Full pipeline for k = 2 cycle instances without isolated vertices: degree
// reduction to fixpoint, outerplanarization to fixpoint, reduction to
// not-all-equal satisfiability, decode, and pull-back. The returned witness
// has been re-verified on both the reduced and the original instance.
CycleSolution solve_cycle(const Instance& in);

// JSON rendering of a trace (rules, roles, edge carry maps) for --emit-trace.
std::string serialize_trace(const TransformationTrace& trace);

}  // namespace orthosefe
