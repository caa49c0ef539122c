#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthosefe/constraints.hpp"
#include "orthosefe/instance.hpp"
#include "orthosefe/naesat.hpp"

namespace orthosefe {

// Monotone formula: every clause holds exactly three distinct positive
// variables.
struct PositiveFormula {
  std::vector<std::string> variables;       // in order of first appearance
  std::vector<std::array<int, 3>> clauses;  // indices into variables
};

// One clause per non-blank line: exactly three whitespace-separated distinct
// variable names.
PositiveFormula parse_positive_3cnf(const std::string& text);

NaeFormula to_nae_formula(const PositiveFormula& f);

struct HardnessInstance {
  Instance instance;
  std::vector<Edge> truth_edges;  // one per formula variable
};

// Three-graph cycle instance whose feasible side assignments correspond to
// the not-all-equal assignments of the formula: a chain of variable gadgets
// and one clause gadget per clause, serpentining block by block, with
// transmission edges tying each variable's blocks together and membership
// edges tying variables to clause slots.
HardnessInstance generate_theorem3(const PositiveFormula& f);

// Two-graph variant with isolated vertices: the middle graph of the
// three-graph construction is dropped and each of its edges becomes a
// three-edge path through two fresh isolated vertices, alternating between
// the two remaining graphs.
HardnessInstance generate_theorem4(const PositiveFormula& f);

// Truth value of each variable read off a feasible side assignment: true iff
// the variable's truth edge lies Left.
std::vector<bool> decode_truth(const HardnessInstance& h, const SideAssignment& a);

struct RandomSpec {
  int n = 8;                 // cycle length / vertex count
  int k = 2;
  int max_exclusive = 10;    // total exclusive edges to aim for
  int union_max_degree = 5;  // cap on shared-plus-exclusive degree per vertex
  std::uint64_t seed = 1;
  bool biconnected = false;  // shared graph: cycle plus chords instead of a bare cycle
  int shared_chords = 2;     // extra shared edges in the biconnected variant
};

// Seeded random instance: a shared cycle (optionally with extra shared
// chords, keeping the shared graph biconnected) plus random exclusive edges
// respecting the per-graph degree bound and the union degree cap.
Instance generate_random(const RandomSpec& spec);

}  // namespace orthosefe
