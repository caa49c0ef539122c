#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orthosefe/instance.hpp"

namespace orthosefe {

enum class Side : uint8_t { Left, Right };

inline Side flip(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
inline char side_letter(Side s) { return s == Side::Left ? 'L' : 'R'; }

// Total map over the exclusive edges of all k graphs.
using SideAssignment = std::map<Edge, Side>;

struct Violation {
  std::string kind;  // "planarity" or "orthogonality" ("not-a-sefe" for rotations)
  std::string detail;
};

struct Verdict {
  bool feasible = false;
  std::optional<SideAssignment> witness;
  std::vector<Violation> violations;
};

// Maximal sets of exclusive edges connected through isolated vertices.  A
// group with one link whose endpoints are both on the cycle is a chord; any
// larger group must form a path between two distinct on-cycle anchors whose
// consecutive links belong to different graphs ("alternating"), with all
// interior vertices isolated.  Anything else is rejected.
struct EdgeGroup {
  std::vector<std::pair<Edge, int>> links;  // (edge, graph) in path order
  VertexId anchor_a = -1;                   // on-cycle endpoints, anchor_a < anchor_b
  VertexId anchor_b = -1;
  bool chord() const { return links.size() == 1; }
};

std::vector<EdgeGroup> exclusive_groups(const Instance& inst);

// Side-assignment verifier for cycle instances.  Planarity: same-graph
// alternating chords must take different sides; a group connected through
// isolated vertices must lie entirely on one side (its links may not cross
// the shared cycle).  Orthogonality: at any on-cycle vertex where one graph
// has two exclusive edges on the same side, every exclusive edge at that
// vertex must be on that side.
Verdict check_assignment(const Instance& inst, const SideAssignment& a);

struct OracleOptions {
  int cap = 24;  // maximum number of exclusive edges the search accepts
  int jobs = 1;
};

// Exhaustive feasibility search over side assignments.  Planarity constraints
// are 2-colorings of alternation components, so only one flip per component
// is free; the component holding the smallest edge is pinned (global flips
// preserve feasibility) and the remaining flip vectors are scanned in
// lexicographic order, lowest feasible vector winning.
Verdict oracle(const Instance& inst, const OracleOptions& opt = {});

// Union rotation system: counterclockwise cyclic order of all incident union
// edges around each vertex.  Restricting one rotation to a graph's edges
// induces that graph's rotation, so the shared rotations agree by
// construction.
using RotationSystem = std::map<VertexId, std::vector<Edge>>;

// Rotation-system verifier for arbitrary shared graphs.  First checks that
// every induced per-graph rotation is planar (Euler's formula per connected
// component, faces counted by dart tracing); failures are reported with kind
// "not-a-sefe".  Then checks the embedding constraints: at a shared-degree-2
// vertex, two same-graph exclusive edges on one side of the shared path force
// every exclusive edge there onto that side; at a shared-degree-3 vertex all
// exclusive edges must lie between the same two shared edges.
Verdict check_sefe_orthogonality(const Instance& inst, const RotationSystem& rot);

SideAssignment load_witness(const Instance& inst, const std::string& text);
std::string serialize_witness(const Instance& inst, const SideAssignment& a);
RotationSystem load_rotation_system(const Instance& inst, const std::string& text);
std::string serialize_rotation_system(const Instance& inst, const RotationSystem& rot);

// Canonical rotation system realizing a feasible side assignment on a cycle
// instance: chords leave each vertex nested by span so that same-side
// same-graph chords never cross.
RotationSystem rotation_from_assignment(const Instance& inst, const SideAssignment& a);

}  // namespace orthosefe
