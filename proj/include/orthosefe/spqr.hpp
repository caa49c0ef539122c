#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orthosefe/constraints.hpp"
#include "orthosefe/instance.hpp"

namespace orthosefe {

enum class NodeKind { S, P, R, Q };

struct SkelEdge {
  Edge e;
  int twin_node = -1;  // -1 only on the real half of an edge node's skeleton
  int twin_slot = -1;
};

struct SpqrNode {
  NodeKind kind;
  std::vector<SkelEdge> skeleton;
};

// Decomposition tree of the (biconnected) shared graph. Every real edge is
// carried by its own Q-node whose skeleton is the real edge plus one virtual
// edge; every skeleton edge of an S/P/R node is virtual and twin-linked.
// Adjacent nodes never share a kind among S and P, and a two-edge S-node
// separates any two adjacent P/R nodes.
struct SpqrTree {
  std::vector<SpqrNode> nodes;
};

SpqrTree build_spqr(const Instance& inst);

std::string dump_spqr(const Instance& inst, const SpqrTree& tree);

// Vertices strictly inside the expansion of a skeleton edge (its endpoints
// excluded), and the real edges of that expansion.
std::vector<VertexId> expansion_vertices(const SpqrTree& t, int node, int slot);
std::vector<Edge> expansion_edges(const SpqrTree& t, int node, int slot);

struct VirtualSegment {
  VertexId pole_a = -1, pole_b = -1;  // in ring walking order
  std::vector<VertexId> side_cw;      // attachments along one bounding face, pole_a to pole_b
  std::vector<VertexId> side_ccw;     // attachments along the other face, pole_b to pole_a
  std::vector<VertexId> behind;       // all expansion vertices (poles excluded)
};

struct SNodeInstance {
  int node = -1;
  std::vector<VertexId> ring;    // skeleton cycle, canonical orientation
  std::vector<int> segment_of;   // per ring edge (ring[i], ring[i+1]): -1 real, else segment index
  std::vector<VirtualSegment> segments;
};

struct ExtractResult {
  bool feasible = true;
  std::string reason;
  std::vector<SNodeInstance> snodes;
};

// Per-series-node cycle views of a normalized instance. Each segment's
// attachments must share a face with the segment's poles; when they cannot,
// the instance is infeasible outright.
ExtractResult extract_snode_instances(const Instance& inst, const SpqrTree& tree);

struct Flattened {
  Instance instance;             // two-graph cycle instance
  std::map<Edge, Edge> to_flat;  // original exclusive edge -> flattened edge
  std::map<Edge, Edge> from_flat;
};

// Cycle view of one series node: real ring edges survive, every segment
// becomes a path gadget that carries the segment's attachments and whose
// chords tie each side's attachment edges together, leaving one free flip
// per segment. `variant` moves one gadget chord to its alternative endpoint.
Flattened flatten_cycle(const Instance& inst, const SNodeInstance& s, bool variant = false);

struct NormalizeResult {
  Instance instance;
  bool feasible = true;
  std::string kind = "planarity";  // violation kind when infeasible
  std::string reason;
  struct Subdivision {
    std::string u, x, w1, w2, w3;
  };
  std::vector<Subdivision> subdivisions;  // in application order
  struct RemovedEdge {
    NamePair e;
    int graph;
  };
  std::vector<RemovedEdge> removed;  // pole-to-pole exclusive edges set aside
};

// Rewrites the instance until every exclusive endpoint has exactly two
// shared edges: the exclusive edges of a degree-three endpoint move onto a
// subdivision gadget placed on the unique real edge selected by the
// endpoint's rigid or parallel structure. A pole-to-pole exclusive edge with
// no guiding neighbor is set aside and reinserted into the final rotation.
NormalizeResult normalize_attachments(const Instance& inst);

struct BiconnectedSolution {
  Verdict verdict;
  std::optional<RotationSystem> rotation;  // verified witness when feasible
};

// Decision procedure for two-graph instances with a biconnected shared
// graph: normalize attachments, decompose, extract per-series-node cycle
// views, solve each with the cycle pipeline, and assemble a rotation witness
// that is re-verified before being returned.
BiconnectedSolution solve_biconnected(const Instance& inst, bool gadget_variant = false);

}  // namespace orthosefe
