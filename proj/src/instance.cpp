#include "orthosefe/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace orthosefe {

using nlohmann::json;
using nlohmann::ordered_json;

VertexId Instance::id_of(const std::string& name) const {
  auto it = ids.find(name);
  if (it == ids.end()) throw InstanceError("unknown vertex \"" + name + "\"");
  return it->second;
}

int Instance::shared_degree(VertexId v) const {
  int d = 0;
  for (const Edge& e : shared) d += e.touches(v) ? 1 : 0;
  return d;
}

int Instance::degree(VertexId v, int graph) const {
  return shared_degree(v) + exclusive_degree(*this, v, graph);
}

bool Instance::has_shared_edge(Edge e) const {
  return std::binary_search(shared.begin(), shared.end(), e);
}

size_t Instance::exclusive_count() const {
  size_t n = 0;
  for (const auto& list : exclusive) n += list.size();
  return n;
}

int exclusive_degree(const Instance& inst, VertexId v, int graph) {
  int d = 0;
  for (const Edge& e : inst.exclusive.at(graph)) d += e.touches(v) ? 1 : 0;
  return d;
}

int graph_of(const Instance& inst, Edge e) {
  if (inst.has_shared_edge(e)) return -1;
  for (int g = 0; g < inst.k; ++g)
    if (std::binary_search(inst.exclusive[g].begin(), inst.exclusive[g].end(), e)) return g;
  throw InstanceError("edge " + edge_name(inst, e) + " is not in the instance");
}

std::string edge_name(const Instance& inst, Edge e) {
  std::string a = inst.names.at(e.u);
  std::string b = inst.names.at(e.v);
  if (b < a) std::swap(a, b);
  return a + "-" + b;
}

bool alternate(const Instance& inst, Edge e, Edge f) {
  if (!inst.cycle) throw InstanceError("alternation is defined on cycle instances");
  if (e.touches(f.u) || e.touches(f.v)) return false;
  const auto& pos = inst.cycle_pos;
  int a = pos[e.u], b = pos[e.v], c = pos[f.u], d = pos[f.v];
  if (a < 0 || b < 0 || c < 0 || d < 0) return false;
  const int n = static_cast<int>(inst.cycle->size());
  auto inside = [&](int x) {  // strictly inside the arc a -> b (forward)
    int db = (b - a + n) % n;
    int dx = (x - a + n) % n;
    return 0 < dx && dx < db;
  };
  return inside(c) != inside(d);
}

namespace {

void intern(Instance& inst, const std::string& name) {
  if (name.empty()) throw InstanceError("empty vertex name");
  auto [it, fresh] = inst.ids.emplace(name, static_cast<VertexId>(inst.names.size()));
  if (!fresh) throw InstanceError("duplicate vertex \"" + name + "\"");
  inst.names.push_back(name);
}

// Shared validation used by the loader and the builders.  Expects names/ids,
// cycle (optional), isolated, shared (cycle form: derived here) and exclusive
// to be already populated with interned ids.
void finalize(Instance& inst) {
  const int n = inst.vertex_count();
  if (inst.k < 2) throw InstanceError("\"k\" must be at least 2");
  if (static_cast<int>(inst.exclusive.size()) != inst.k)
    throw InstanceError("\"exclusive\" must list one edge set per graph");

  inst.cycle_pos.assign(n, -1);
  if (inst.cycle) {
    auto& cyc = *inst.cycle;
    if (cyc.size() < 3) throw InstanceError("cycle must have at least 3 vertices");
    for (size_t i = 0; i < cyc.size(); ++i) {
      if (inst.cycle_pos[cyc[i]] >= 0)
        throw InstanceError("vertex \"" + inst.names[cyc[i]] + "\" appears twice in the cycle");
      inst.cycle_pos[cyc[i]] = static_cast<int>(i);
    }
    inst.shared.clear();
    for (size_t i = 0; i < cyc.size(); ++i)
      inst.shared.emplace_back(cyc[i], cyc[(i + 1) % cyc.size()]);
  }

  std::sort(inst.shared.begin(), inst.shared.end());
  for (const Edge& e : inst.shared) {
    if (e.u == e.v) throw InstanceError("self-loop at \"" + inst.names[e.u] + "\"");
    if (e.u < 0 || e.v >= n) throw InstanceError("shared edge endpoint out of range");
  }
  if (std::adjacent_find(inst.shared.begin(), inst.shared.end()) != inst.shared.end())
    throw InstanceError("duplicate shared edge");

  // Isolated bookkeeping: isolated vertices are exactly those without shared
  // edges, and in cycle form exactly the off-cycle vertices.
  std::vector<bool> listed(n, false);
  for (VertexId v : inst.isolated) {
    if (listed[v]) throw InstanceError("vertex \"" + inst.names[v] + "\" listed isolated twice");
    listed[v] = true;
  }
  for (VertexId v = 0; v < n; ++v) {
    const bool off = inst.shared_degree(v) == 0;
    if (off && !listed[v])
      throw InstanceError(inst.cycle
                              ? "vertex \"" + inst.names[v] + "\" is neither on the cycle nor listed isolated"
                              : "vertex \"" + inst.names[v] + "\" has no shared edge and is not listed isolated");
    if (!off && listed[v])
      throw InstanceError("isolated vertex \"" + inst.names[v] + "\" has a shared edge");
  }

  std::set<Edge> seen;  // across all exclusive lists, for the sunflower check
  for (int g = 0; g < inst.k; ++g) {
    auto& list = inst.exclusive[g];
    std::sort(list.begin(), list.end());
    for (size_t i = 0; i < list.size(); ++i) {
      const Edge& e = list[i];
      if (e.u == e.v) throw InstanceError("self-loop at \"" + inst.names[e.u] + "\"");
      if (e.u < 0 || e.v >= n) throw InstanceError("exclusive edge endpoint out of range");
      if (i > 0 && list[i - 1] == e)
        throw InstanceError("duplicate edge " + edge_name(inst, e) + " in graph " + std::to_string(g));
      if (!seen.insert(e).second)
        throw InstanceError("edge " + edge_name(inst, e) +
                            " appears in two exclusive lists (sunflower violation)");
      if (inst.has_shared_edge(e))
        throw InstanceError("exclusive edge " + edge_name(inst, e) + " duplicates a shared edge");
    }
  }

  for (int g = 0; g < inst.k; ++g)
    for (VertexId v = 0; v < n; ++v)
      if (inst.degree(v, g) > 4)
        throw InstanceError("degree bound exceeded at vertex \"" + inst.names[v] + "\" in graph " +
                            std::to_string(g));
}

Edge edge_from_names(Instance& inst, const std::string& a, const std::string& b) {
  if (a == b) throw InstanceError("self-loop at \"" + a + "\"");
  return Edge(inst.id_of(a), inst.id_of(b));
}

}  // namespace

Instance load_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw InstanceError(std::string("parse error: ") + ex.what());
  }
  try {
    if (!doc.is_object()) throw InstanceError("parse error: top level must be an object");
    Instance inst;
    inst.k = doc.value("k", 2);
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
      throw InstanceError("\"vertices\" must be an array of names");
    for (const auto& v : doc["vertices"]) intern(inst, v.get<std::string>());

    const bool has_cycle = doc.contains("cycle");
    const bool has_shared = doc.contains("shared");
    if (has_cycle == has_shared)
      throw InstanceError("exactly one of \"cycle\" or \"shared\" must be present");
    if (has_cycle) {
      std::vector<VertexId> cyc;
      for (const auto& v : doc["cycle"]) cyc.push_back(inst.id_of(v.get<std::string>()));
      inst.cycle = std::move(cyc);
    } else {
      for (const auto& pair : doc["shared"]) {
        if (!pair.is_array() || pair.size() != 2) throw InstanceError("shared edges must be name pairs");
        inst.shared.push_back(edge_from_names(inst, pair[0].get<std::string>(), pair[1].get<std::string>()));
      }
    }

    if (doc.contains("isolated"))
      for (const auto& v : doc["isolated"]) inst.isolated.push_back(inst.id_of(v.get<std::string>()));
    else if (has_cycle) {
      // Convenience: off-cycle vertices may be left implicit only when absent.
      // finalize() rejects off-cycle vertices that are not listed, so nothing
      // to do here.
    }

    if (!doc.contains("exclusive") || !doc["exclusive"].is_array())
      throw InstanceError("\"exclusive\" must be an array of edge lists");
    for (const auto& list : doc["exclusive"]) {
      std::vector<Edge> edges;
      for (const auto& pair : list) {
        if (!pair.is_array() || pair.size() != 2)
          throw InstanceError("exclusive edges must be name pairs");
        Instance& self = inst;
        edges.push_back(edge_from_names(self, pair[0].get<std::string>(), pair[1].get<std::string>()));
      }
      inst.exclusive.push_back(std::move(edges));
    }

    finalize(inst);
    return inst;
  } catch (const json::exception& ex) {
    throw InstanceError(std::string("parse error: ") + ex.what());
  }
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot read file \"" + path + "\"");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_instance(buf.str());
}

std::string serialize_instance(const Instance& inst) {
  ordered_json doc;
  doc["k"] = inst.k;
  doc["vertices"] = json::array();
  for (const auto& name : inst.names) doc["vertices"].push_back(name);
  if (inst.cycle) {
    doc["cycle"] = json::array();
    for (VertexId v : *inst.cycle) doc["cycle"].push_back(inst.names[v]);
  } else {
    doc["shared"] = json::array();
    for (const Edge& e : inst.shared)
      doc["shared"].push_back({inst.names[e.u], inst.names[e.v]});
  }
  doc["exclusive"] = json::array();
  for (const auto& list : inst.exclusive) {
    ordered_json edges = ordered_json::array();
    for (const Edge& e : list) edges.push_back({inst.names[e.u], inst.names[e.v]});
    doc["exclusive"].push_back(std::move(edges));
  }
  if (!inst.isolated.empty()) {
    doc["isolated"] = json::array();
    for (VertexId v : inst.isolated) doc["isolated"].push_back(inst.names[v]);
  }
  return doc.dump(2) + "\n";
}

Instance make_cycle_instance(const std::vector<std::string>& cycle,
                             const std::vector<std::vector<NamePair>>& exclusive,
                             const std::vector<std::string>& isolated) {
  Instance inst;
  inst.k = static_cast<int>(exclusive.size());
  for (const auto& name : cycle) intern(inst, name);
  for (const auto& name : isolated) intern(inst, name);
  std::vector<VertexId> cyc;
  for (const auto& name : cycle) cyc.push_back(inst.id_of(name));
  inst.cycle = std::move(cyc);
  for (const auto& name : isolated) inst.isolated.push_back(inst.id_of(name));
  for (const auto& list : exclusive) {
    std::vector<Edge> edges;
    for (const auto& [a, b] : list) edges.push_back(edge_from_names(inst, a, b));
    inst.exclusive.push_back(std::move(edges));
  }
  finalize(inst);
  return inst;
}

Instance make_shared_instance(const std::vector<std::string>& vertices,
                              const std::vector<NamePair>& shared,
                              const std::vector<std::vector<NamePair>>& exclusive) {
  Instance inst;
  inst.k = static_cast<int>(exclusive.size());
  for (const auto& name : vertices) intern(inst, name);
  for (const auto& [a, b] : shared) inst.shared.push_back(edge_from_names(inst, a, b));
  for (const auto& list : exclusive) {
    std::vector<Edge> edges;
    for (const auto& [a, b] : list) edges.push_back(edge_from_names(inst, a, b));
    inst.exclusive.push_back(std::move(edges));
  }
  // Vertices without shared edges are implicitly isolated for the builder.
  std::vector<bool> touched(inst.vertex_count(), false);
  for (const Edge& e : inst.shared) touched[e.u] = touched[e.v] = true;
  for (VertexId v = 0; v < inst.vertex_count(); ++v)
    if (!touched[v]) inst.isolated.push_back(v);
  finalize(inst);
  return inst;
}

std::optional<Instance> as_cycle_form(const Instance& inst) {
  if (inst.cycle) return inst;
  const int n = inst.vertex_count();
  std::vector<std::vector<VertexId>> adj(n);
  for (const Edge& e : inst.shared) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  VertexId start = -1;
  int on_cycle = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (adj[v].empty()) continue;
    if (adj[v].size() != 2) return std::nullopt;
    ++on_cycle;
    if (start < 0) start = v;
  }
  if (start < 0 || on_cycle < 3) return std::nullopt;
  std::vector<VertexId> order{start};
  VertexId prev = start;
  VertexId cur = std::min(adj[start][0], adj[start][1]);
  while (cur != start) {
    order.push_back(cur);
    VertexId next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
  }
  if (static_cast<int>(order.size()) != on_cycle) return std::nullopt;  // several cycles

  Instance out = inst;
  out.cycle = std::move(order);
  out.cycle_pos.assign(n, -1);
  for (size_t i = 0; i < out.cycle->size(); ++i) out.cycle_pos[(*out.cycle)[i]] = static_cast<int>(i);
  return out;
}

bool shared_graph_biconnected(const Instance& inst) {
  const int n = inst.vertex_count();
  if (n < 3 || !inst.isolated.empty()) return false;
  std::vector<std::vector<VertexId>> adj(n);
  for (const Edge& e : inst.shared) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  // Iterative DFS computing articulation points.
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1), child_count(n, 0);
  std::vector<size_t> next(n, 0);
  int timer = 0;
  std::vector<VertexId> stack{0};
  disc[0] = low[0] = timer++;
  bool articulation = false;
  while (!stack.empty()) {
    VertexId v = stack.back();
    if (next[v] < adj[v].size()) {
      VertexId w = adj[v][next[v]++];
      if (disc[w] < 0) {
        parent[w] = v;
        ++child_count[v];
        disc[w] = low[w] = timer++;
        stack.push_back(w);
      } else if (w != parent[v]) {
        low[v] = std::min(low[v], disc[w]);
      }
    } else {
      stack.pop_back();
      if (parent[v] >= 0) {
        low[parent[v]] = std::min(low[parent[v]], low[v]);
        if (parent[v] != 0 && low[v] >= disc[parent[v]]) articulation = true;
      }
    }
  }
  if (child_count[0] > 1) articulation = true;
  for (VertexId v = 0; v < n; ++v)
    if (disc[v] < 0) return false;  // disconnected
  return !articulation;
}

}  // namespace orthosefe
