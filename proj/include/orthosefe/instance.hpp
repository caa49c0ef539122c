#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace orthosefe {

using VertexId = int;

// Undirected edge on interned vertex ids; endpoints are stored normalized
// so that u < v and edges compare as unordered pairs.
struct Edge {
  VertexId u{-1};
  VertexId v{-1};
  Edge() = default;
  Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}
  bool touches(VertexId x) const { return u == x || v == x; }
  VertexId other(VertexId x) const { return u == x ? v : u; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an internally produced witness fails its own re-check; the CLI
// maps it to a dedicated exit code so corrupted results are never silent.
struct InternalCheckError : std::logic_error {
  using std::logic_error::logic_error;
};

// k planar graphs on one vertex set.  Every graph contains the shared edges;
// graph i additionally contains exclusive[i].  The shared graph is either a
// cycle (given by vertex order, with off-cycle vertices listed as isolated)
// or an arbitrary edge list.
struct Instance {
  int k = 2;
  std::vector<std::string> names;                 // id -> name
  std::unordered_map<std::string, VertexId> ids;  // name -> id
  std::vector<Edge> shared;                       // sorted, unique
  std::vector<std::vector<Edge>> exclusive;       // k lists, each sorted, unique
  std::optional<std::vector<VertexId>> cycle;     // set iff cycle form
  std::vector<VertexId> isolated;                 // vertices with no shared edge
  std::vector<int> cycle_pos;                     // id -> position on cycle, -1 off

  VertexId id_of(const std::string& name) const;
  const std::string& name_of(VertexId v) const { return names.at(v); }
  int vertex_count() const { return static_cast<int>(names.size()); }
  bool is_cycle_form() const { return cycle.has_value(); }
  bool on_cycle(VertexId v) const { return cycle_pos[v] >= 0; }
  int shared_degree(VertexId v) const;
  int degree(VertexId v, int graph) const;  // shared plus exclusive[graph]
  bool has_shared_edge(Edge e) const;
  size_t exclusive_count() const;
};

Instance load_instance(const std::string& text);
Instance load_instance_file(const std::string& path);
std::string serialize_instance(const Instance& inst);

using NamePair = std::pair<std::string, std::string>;

// Builders running the same validation as the loader.  Vertex ids are
// assigned in the order vertices are first listed.
Instance make_cycle_instance(const std::vector<std::string>& cycle,
                             const std::vector<std::vector<NamePair>>& exclusive,
                             const std::vector<std::string>& isolated = {});
Instance make_shared_instance(const std::vector<std::string>& vertices,
                              const std::vector<NamePair>& shared,
                              const std::vector<std::vector<NamePair>>& exclusive);

// True when the endpoints of e and f strictly interleave along the cycle;
// edges sharing an endpoint or touching off-cycle vertices never alternate.
bool alternate(const Instance& inst, Edge e, Edge f);

int exclusive_degree(const Instance& inst, VertexId v, int graph);

// Graph index of an exclusive edge, or -1 for a shared edge.
int graph_of(const Instance& inst, Edge e);

// Canonical display name "a-b" with endpoint names in lexicographic order.
std::string edge_name(const Instance& inst, Edge e);

// Cycle-form view of a shared-form instance whose shared graph is a single
// cycle covering all non-isolated vertices; nullopt otherwise.  Vertex ids
// are preserved.
std::optional<Instance> as_cycle_form(const Instance& inst);

bool shared_graph_biconnected(const Instance& inst);

}  // namespace orthosefe
