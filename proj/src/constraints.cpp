#include "orthosefe/constraints.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <thread>

#include "json.hpp"

namespace orthosefe {

using nlohmann::json;

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::string link_list(const Instance& inst, const std::vector<std::pair<Edge, int>>& links) {
  std::string out;
  for (const auto& [e, g] : links) {
    if (!out.empty()) out += ", ";
    out += edge_name(inst, e);
  }
  return out;
}

}  // namespace

std::vector<EdgeGroup> exclusive_groups(const Instance& inst) {
  if (!inst.cycle) throw InstanceError("exclusive-edge groups are defined on cycle instances");
  struct Link {
    Edge e;
    int g;
  };
  std::vector<Link> links;
  for (int g = 0; g < inst.k; ++g)
    for (const Edge& e : inst.exclusive[g]) links.push_back({e, g});

  const int L = static_cast<int>(links.size());
  Dsu dsu(L);
  std::vector<std::vector<int>> at_vertex(inst.vertex_count());
  for (int i = 0; i < L; ++i) {
    at_vertex[links[i].e.u].push_back(i);
    at_vertex[links[i].e.v].push_back(i);
  }
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    if (inst.on_cycle(v)) continue;
    for (size_t i = 1; i < at_vertex[v].size(); ++i) dsu.unite(at_vertex[v][0], at_vertex[v][i]);
  }

  std::map<int, std::vector<int>> members;
  for (int i = 0; i < L; ++i) members[dsu.find(i)].push_back(i);

  std::vector<EdgeGroup> groups;
  for (auto& [root, idxs] : members) {
    EdgeGroup grp;
    if (idxs.size() == 1) {
      const Link& l = links[idxs[0]];
      if (!inst.on_cycle(l.e.u) || !inst.on_cycle(l.e.v))
        throw InstanceError("malformed exclusive-edge group: edge " + edge_name(inst, l.e) +
                            " dangles at an isolated vertex");
      grp.links = {{l.e, l.g}};
      grp.anchor_a = l.e.u;
      grp.anchor_b = l.e.v;
      groups.push_back(std::move(grp));
      continue;
    }
    // Larger groups must be paths: isolated interior vertices of degree two,
    // two distinct on-cycle anchors of degree one, links alternating graphs.
    std::map<VertexId, std::vector<int>> deg;
    for (int i : idxs) {
      deg[links[i].e.u].push_back(i);
      deg[links[i].e.v].push_back(i);
    }
    std::vector<VertexId> anchors;
    for (auto& [v, inc] : deg) {
      if (inst.on_cycle(v)) {
        if (inc.size() != 1)
          throw InstanceError("malformed exclusive-edge group: on-cycle vertex \"" + inst.names[v] +
                              "\" carries " + std::to_string(inc.size()) + " of its edges");
        anchors.push_back(v);
      } else if (inc.size() != 2) {
        throw InstanceError("malformed exclusive-edge group: isolated vertex \"" + inst.names[v] +
                            "\" carries " + std::to_string(inc.size()) + " exclusive edges");
      }
    }
    if (anchors.size() != 2)
      throw InstanceError("malformed exclusive-edge group: expected two distinct on-cycle anchors, found " +
                          std::to_string(anchors.size()));
    grp.anchor_a = std::min(anchors[0], anchors[1]);
    grp.anchor_b = std::max(anchors[0], anchors[1]);
    VertexId cur = grp.anchor_a;
    std::set<int> used;
    int prev_graph = -1;
    while (static_cast<int>(used.size()) < static_cast<int>(idxs.size())) {
      int next = -1;
      for (int i : deg[cur])
        if (!used.count(i)) next = i;
      if (next < 0)
        throw InstanceError("malformed exclusive-edge group: edges " + link_list(inst, grp.links) +
                            " do not form a single path");
      if (links[next].g == prev_graph)
        throw InstanceError("malformed exclusive-edge group: consecutive edges at \"" + inst.names[cur] +
                            "\" belong to the same graph");
      used.insert(next);
      grp.links.push_back({links[next].e, links[next].g});
      prev_graph = links[next].g;
      cur = links[next].e.other(cur);
    }
    if (cur != grp.anchor_b)
      throw InstanceError("malformed exclusive-edge group: path does not end at its second anchor");
    groups.push_back(std::move(grp));
  }
  std::sort(groups.begin(), groups.end(), [](const EdgeGroup& a, const EdgeGroup& b) {
    return a.links[0].first < b.links[0].first;
  });
  return groups;
}

Verdict check_assignment(const Instance& inst, const SideAssignment& a) {
  if (!inst.cycle) throw InstanceError("side assignments are defined on cycle instances");
  for (int g = 0; g < inst.k; ++g)
    for (const Edge& e : inst.exclusive[g])
      if (!a.count(e)) throw InstanceError("partial assignment: missing side for " + edge_name(inst, e));
  if (a.size() != inst.exclusive_count())
    throw InstanceError("assignment mentions edges that are not exclusive edges of the instance");

  Verdict out;
  const auto groups = exclusive_groups(inst);

  for (const EdgeGroup& grp : groups) {
    if (grp.links.size() < 2) continue;
    const Side s0 = a.at(grp.links[0].first);
    bool coherent = true;
    for (const auto& [e, g] : grp.links) coherent &= a.at(e) == s0;
    if (!coherent)
      out.violations.push_back({"planarity",
                                "edges connected through isolated vertices must lie on one side: " +
                                    link_list(inst, grp.links)});
  }

  for (size_t i = 0; i < groups.size(); ++i) {
    if (!groups[i].chord()) continue;
    const auto& [ei, gi] = groups[i].links[0];
    for (size_t j = i + 1; j < groups.size(); ++j) {
      if (!groups[j].chord()) continue;
      const auto& [ej, gj] = groups[j].links[0];
      if (gi != gj || !alternate(inst, ei, ej)) continue;
      if (a.at(ei) == a.at(ej))
        out.violations.push_back({"planarity", edge_name(inst, ei) + " and " + edge_name(inst, ej) +
                                                   " of graph " + std::to_string(gi) +
                                                   " alternate but lie on the same side"});
    }
  }

  // Orthogonality: a same-graph pair on one side at a vertex forces every
  // exclusive edge at that vertex onto that side.
  std::vector<std::vector<std::pair<int, Edge>>> incident(inst.vertex_count());
  for (int g = 0; g < inst.k; ++g)
    for (const Edge& e : inst.exclusive[g]) {
      incident[e.u].push_back({g, e});
      incident[e.v].push_back({g, e});
    }
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    if (!inst.on_cycle(v) || incident[v].size() < 3) continue;
    for (int g = 0; g < inst.k; ++g) {
      for (Side s : {Side::Left, Side::Right}) {
        int same = 0;
        for (const auto& [gg, e] : incident[v])
          if (gg == g && a.at(e) == s) ++same;
        if (same < 2) continue;
        std::string offenders;
        for (const auto& [gg, e] : incident[v])
          if (a.at(e) != s) offenders += (offenders.empty() ? "" : ", ") + edge_name(inst, e);
        if (!offenders.empty())
          out.violations.push_back({"orthogonality",
                                    "at vertex \"" + inst.names[v] + "\" two graph-" + std::to_string(g) +
                                        " edges share a side, yet " + offenders + " lie on the other side"});
      }
    }
  }

  out.feasible = out.violations.empty();
  if (out.feasible) out.witness = a;
  return out;
}

namespace {

struct FlipSearch {
  // Static structure of the component/flip search.
  std::vector<EdgeGroup> groups;
  std::vector<int> color;  // canonical 2-coloring per group
  std::vector<int> comp;   // component index per group (ordered by smallest edge)
  int num_components = 0;
  // Orthogonality structure: per relevant vertex, incident (graph, group).
  struct VertexItems {
    std::vector<std::pair<int, int>> items;  // (graph, group)
  };
  std::vector<VertexItems> vertices;
  int k = 2;

  bool vertex_ok(const VertexItems& vx, const std::vector<uint8_t>& flip) const {
    for (int g = 0; g < k; ++g)
      for (int s = 0; s < 2; ++s) {
        int same = 0, other = 0;
        for (const auto& [gg, grp] : vx.items) {
          const int sd = color[grp] ^ flip[comp[grp]];  // 0 = Left
          if (gg == g && sd == s) ++same;
          if (sd != s) ++other;
        }
        if (same >= 2 && other > 0) return false;
      }
    return true;
  }

  bool orthogonal(uint64_t x) const {
    // f_0 = 0; f_j for j >= 1 is bit (num_components - 1 - j) of x, so that
    // counting x upward enumerates flip vectors lexicographically.
    std::vector<uint8_t> flip(num_components, 0);
    for (int c = 1; c < num_components; ++c)
      flip[c] = static_cast<uint8_t>((x >> (num_components - 1 - c)) & 1);
    for (const auto& vx : vertices)
      if (!vertex_ok(vx, flip)) return false;
    return true;
  }

  // Depth-first search over component flips in index order, no-flip branch
  // first, so the first solution is the lexicographically least flip vector —
  // the same canonical witness the exhaustive enumeration finds. A vertex
  // constraint is checked at the depth where its last component receives a
  // value, which prunes dead branches as soon as they become dead.
  std::optional<std::vector<uint8_t>> dfs_search() const {
    std::vector<std::vector<int>> by_depth(num_components);
    for (size_t vi = 0; vi < vertices.size(); ++vi) {
      int deepest = 0;
      for (const auto& [g, grp] : vertices[vi].items) deepest = std::max(deepest, comp[grp]);
      by_depth[deepest].push_back(static_cast<int>(vi));
    }
    std::vector<uint8_t> flip(num_components, 0);
    auto ok_at = [&](int c) {
      for (int vi : by_depth[c])
        if (!vertex_ok(vertices[vi], flip)) return false;
      return true;
    };
    if (!ok_at(0)) return std::nullopt;
    std::function<bool(int)> descend = [&](int c) -> bool {
      if (c == num_components) return true;
      for (int f = 0; f < 2; ++f) {
        flip[c] = static_cast<uint8_t>(f);
        if (ok_at(c) && descend(c + 1)) return true;
      }
      flip[c] = 0;
      return false;
    };
    if (!descend(1)) return std::nullopt;
    return flip;
  }
};

}  // namespace

Verdict oracle(const Instance& inst, const OracleOptions& opt) {
  if (!inst.cycle) throw InstanceError("the oracle requires a cycle instance");
  const size_t m = inst.exclusive_count();
  if (m > static_cast<size_t>(opt.cap))
    throw InstanceError("cap exceeded: " + std::to_string(m) + " exclusive edges, cap " +
                        std::to_string(opt.cap));

  FlipSearch fs;
  fs.k = inst.k;
  fs.groups = exclusive_groups(inst);
  const int G = static_cast<int>(fs.groups.size());

  if (G == 0) {
    Verdict out;
    out.feasible = true;
    out.witness = SideAssignment{};
    return out;
  }

  // Planarity constraints: same-graph alternating chords take opposite sides.
  std::vector<std::vector<int>> adj(G);
  for (int i = 0; i < G; ++i) {
    if (!fs.groups[i].chord()) continue;
    for (int j = i + 1; j < G; ++j) {
      if (!fs.groups[j].chord()) continue;
      if (fs.groups[i].links[0].second != fs.groups[j].links[0].second) continue;
      if (!alternate(inst, fs.groups[i].links[0].first, fs.groups[j].links[0].first)) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  }

  // 2-color each component; groups are already ordered by smallest edge, so a
  // BFS from the first unvisited group anchors every component's canonical
  // coloring at its smallest member (color 0 = Left under flip 0) and numbers
  // components by smallest member edge.
  fs.color.assign(G, -1);
  fs.comp.assign(G, -1);
  for (int i = 0; i < G; ++i) {
    if (fs.color[i] >= 0) continue;
    const int c = fs.num_components++;
    fs.color[i] = 0;
    fs.comp[i] = c;
    std::vector<int> queue{i};
    while (!queue.empty()) {
      int cur = queue.back();
      queue.pop_back();
      for (int nb : adj[cur]) {
        if (fs.color[nb] < 0) {
          fs.color[nb] = fs.color[cur] ^ 1;
          fs.comp[nb] = c;
          queue.push_back(nb);
        } else if (fs.color[nb] == fs.color[cur]) {
          Verdict out;
          out.violations.push_back({"planarity",
                                    "alternation constraints between " +
                                        edge_name(inst, fs.groups[cur].links[0].first) + " and " +
                                        edge_name(inst, fs.groups[nb].links[0].first) +
                                        " form an odd cycle"});
          return out;
        }
      }
    }
  }

  // Orthogonality structure over on-cycle vertices with three or more
  // incident exclusive edges.
  {
    std::vector<std::vector<std::pair<int, int>>> incident(inst.vertex_count());
    for (int i = 0; i < G; ++i)
      for (const auto& [e, g] : fs.groups[i].links) {
        if (inst.on_cycle(e.u)) incident[e.u].push_back({g, i});
        if (inst.on_cycle(e.v)) incident[e.v].push_back({g, i});
      }
    for (VertexId v = 0; v < inst.vertex_count(); ++v)
      if (incident[v].size() >= 3) fs.vertices.push_back({incident[v]});
  }

  const int jobs = std::max(1, opt.jobs);
  std::optional<std::vector<uint8_t>> flips;
  if (jobs > 1 && fs.num_components >= 11 && fs.num_components <= 31) {
    // Chunked enumeration of the flip space; the lowest surviving x is the
    // lexicographically least flip vector, matching the depth-first search.
    const uint64_t total = uint64_t{1} << (fs.num_components - 1);
    std::atomic<uint64_t> best{UINT64_MAX};
    const uint64_t chunk = (total + jobs - 1) / jobs;
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        const uint64_t lo = chunk * w;
        const uint64_t hi = std::min(total, lo + chunk);
        for (uint64_t x = lo; x < hi; ++x) {
          if (best.load(std::memory_order_relaxed) <= x) return;
          if (fs.orthogonal(x)) {
            uint64_t cur = best.load();
            while (x < cur && !best.compare_exchange_weak(cur, x)) {
            }
            return;
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    const uint64_t winner = best.load();
    if (winner != UINT64_MAX) {
      std::vector<uint8_t> f(fs.num_components, 0);
      for (int c = 1; c < fs.num_components; ++c)
        f[c] = static_cast<uint8_t>((winner >> (fs.num_components - 1 - c)) & 1);
      flips = std::move(f);
    }
  } else {
    flips = fs.dfs_search();
  }

  if (!flips) return Verdict{};

  SideAssignment a;
  for (int i = 0; i < G; ++i) {
    const Side s = (fs.color[i] ^ (*flips)[fs.comp[i]]) == 0 ? Side::Left : Side::Right;
    for (const auto& [e, g] : fs.groups[i].links) a[e] = s;
  }
  Verdict check = check_assignment(inst, a);
  if (!check.feasible)
    throw InternalCheckError("oracle produced a witness that fails verification");
  return check;
}

namespace {

// Face count per connected component of one graph under the induced rotation,
// via dart tracing: arriving at v over (u,v), the walk continues with the
// successor of (v,u) in the counterclockwise rotation at v.
bool graph_rotation_planar(const Instance& inst, const RotationSystem& rot, int graph,
                           std::string* why) {
  std::vector<Edge> edges = inst.shared;
  edges.insert(edges.end(), inst.exclusive[graph].begin(), inst.exclusive[graph].end());
  if (edges.empty()) return true;
  std::sort(edges.begin(), edges.end());

  std::map<VertexId, std::vector<VertexId>> order;  // induced rotation: neighbors
  for (const auto& [v, list] : rot) {
    std::vector<VertexId> nbrs;
    for (const Edge& e : list)
      if (std::binary_search(edges.begin(), edges.end(), e)) nbrs.push_back(e.other(v));
    if (!nbrs.empty()) order[v] = std::move(nbrs);
  }

  auto succ = [&](VertexId v, VertexId w) -> VertexId {
    const auto& nbrs = order.at(v);
    for (size_t i = 0; i < nbrs.size(); ++i)
      if (nbrs[i] == w) return nbrs[(i + 1) % nbrs.size()];
    return -1;
  };

  Dsu dsu(inst.vertex_count());
  for (const Edge& e : edges) dsu.unite(e.u, e.v);

  std::map<std::pair<VertexId, VertexId>, bool> seen;
  for (const Edge& e : edges) {
    seen[{e.u, e.v}] = false;
    seen[{e.v, e.u}] = false;
  }
  std::map<int, long long> faces, vcount, ecount;
  for (const Edge& e : edges) ecount[dsu.find(e.u)]++;
  {
    std::set<VertexId> touched;
    for (const Edge& e : edges) {
      touched.insert(e.u);
      touched.insert(e.v);
    }
    for (VertexId v : touched) vcount[dsu.find(v)]++;
  }
  for (auto& [dart, used] : seen) {
    if (used) continue;
    const int root = dsu.find(dart.first);
    ++faces[root];
    auto cur = dart;
    while (!seen[cur]) {
      seen[cur] = true;
      VertexId nxt = succ(cur.second, cur.first);
      if (nxt < 0) return false;  // rotation missing a dart; caught earlier
      cur = {cur.second, nxt};
    }
  }
  for (auto& [root, f] : faces) {
    if (vcount[root] - ecount[root] + f != 2) {
      if (why)
        *why = "graph " + std::to_string(graph) + " is not planar under the given rotation (component at \"" +
               inst.names[root] + "\": V=" + std::to_string(vcount[root]) + " E=" + std::to_string(ecount[root]) +
               " F=" + std::to_string(f) + ")";
      return false;
    }
  }
  return true;
}

}  // namespace

Verdict check_sefe_orthogonality(const Instance& inst, const RotationSystem& rot) {
  // Validate the rotation covers exactly the union incidences.
  std::vector<std::vector<Edge>> incident(inst.vertex_count());
  for (const Edge& e : inst.shared) {
    incident[e.u].push_back(e);
    incident[e.v].push_back(e);
  }
  for (int g = 0; g < inst.k; ++g)
    for (const Edge& e : inst.exclusive[g]) {
      incident[e.u].push_back(e);
      incident[e.v].push_back(e);
    }
  for (const auto& [v, list] : rot)
    if (v < 0 || v >= inst.vertex_count())
      throw InstanceError("rotation system mentions an unknown vertex id");
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    auto it = rot.find(v);
    const size_t have = it == rot.end() ? 0 : it->second.size();
    if (have != incident[v].size())
      throw InstanceError("rotation at \"" + inst.names[v] + "\" must list exactly its " +
                          std::to_string(incident[v].size()) + " incident edges");
    if (it == rot.end()) continue;
    auto sorted = it->second;
    std::sort(sorted.begin(), sorted.end());
    auto want = incident[v];
    std::sort(want.begin(), want.end());
    if (sorted != want)
      throw InstanceError("rotation at \"" + inst.names[v] + "\" does not match its incident edges");
  }

  Verdict out;
  for (int g = 0; g < inst.k; ++g) {
    std::string why;
    if (!graph_rotation_planar(inst, rot, g, &why)) out.violations.push_back({"not-a-sefe", why});
  }
  if (!out.violations.empty()) return out;  // orthogonality is meaningless without a SEFE

  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    const int ds = inst.shared_degree(v);
    if (ds <= 1) continue;
    auto it = rot.find(v);
    if (it == rot.end()) continue;
    const auto& list = it->second;
    std::vector<int> shared_pos;
    for (size_t i = 0; i < list.size(); ++i)
      if (inst.has_shared_edge(list[i])) shared_pos.push_back(static_cast<int>(i));
    const int exclusive_here = static_cast<int>(list.size()) - ds;
    if (exclusive_here == 0) continue;

    if (ds >= 4) {
      out.violations.push_back({"orthogonality", "vertex \"" + inst.names[v] +
                                                     "\" has four shared edges and exclusive edges besides"});
      continue;
    }

    // Gap index of each exclusive edge: which pair of consecutive shared
    // edges it falls between in the rotation.
    auto gap_of = [&](int pos) {
      for (size_t s = 0; s < shared_pos.size(); ++s) {
        const int a = shared_pos[s];
        const int b = shared_pos[(s + 1) % shared_pos.size()];
        const int n = static_cast<int>(list.size());
        const int width = (b - a + n) % n;
        const int off = (pos - a + n) % n;
        if (off > 0 && off < width) return static_cast<int>(s);
        if (width == 0) return static_cast<int>(s);  // single shared edge pair collapsed
      }
      return -1;
    };

    if (ds == 3) {
      std::set<int> gaps;
      std::string names;
      for (size_t i = 0; i < list.size(); ++i)
        if (!inst.has_shared_edge(list[i])) {
          gaps.insert(gap_of(static_cast<int>(i)));
          names += (names.empty() ? "" : ", ") + edge_name(inst, list[i]);
        }
      if (gaps.size() > 1)
        out.violations.push_back({"orthogonality",
                                  "vertex \"" + inst.names[v] + "\" of shared degree 3 has exclusive edges (" +
                                      names + ") in different shared-edge gaps"});
      continue;
    }

    // ds == 2: two sides.
    std::vector<std::vector<std::pair<int, Edge>>> side_edges(2);
    for (size_t i = 0; i < list.size(); ++i) {
      if (inst.has_shared_edge(list[i])) continue;
      const int gap = gap_of(static_cast<int>(i));
      side_edges[gap].push_back({graph_of(inst, list[i]), list[i]});
    }
    for (int g = 0; g < inst.k; ++g)
      for (int s = 0; s < 2; ++s) {
        int same = 0;
        for (const auto& [gg, e] : side_edges[s]) same += gg == g ? 1 : 0;
        if (same < 2 || side_edges[1 - s].empty()) continue;
        std::string offenders;
        for (const auto& [gg, e] : side_edges[1 - s])
          offenders += (offenders.empty() ? "" : ", ") + edge_name(inst, e);
        out.violations.push_back({"orthogonality",
                                  "at vertex \"" + inst.names[v] + "\" two graph-" + std::to_string(g) +
                                      " edges share a side of the shared path, yet " + offenders +
                                      " lie on the other side"});
      }
  }

  out.feasible = out.violations.empty();
  return out;
}

SideAssignment load_witness(const Instance& inst, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw InstanceError(std::string("parse error: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("assignment") || !doc["assignment"].is_object())
    throw InstanceError("witness must contain an \"assignment\" object");
  std::map<std::string, Edge> expected;
  for (int g = 0; g < inst.k; ++g)
    for (const Edge& e : inst.exclusive[g]) expected.emplace(edge_name(inst, e), e);
  SideAssignment a;
  for (const auto& [key, val] : doc["assignment"].items()) {
    auto it = expected.find(key);
    if (it == expected.end())
      throw InstanceError("witness key \"" + key + "\" does not name an exclusive edge");
    const std::string s = val.get<std::string>();
    if (s != "L" && s != "R") throw InstanceError("witness side for " + key + " must be \"L\" or \"R\"");
    a[it->second] = s == "L" ? Side::Left : Side::Right;
  }
  for (const auto& [key, e] : expected)
    if (!a.count(e)) throw InstanceError("partial assignment: missing side for " + key);
  return a;
}

std::string serialize_witness(const Instance& inst, const SideAssignment& a) {
  json obj = json::object();
  for (const auto& [e, s] : a) obj[edge_name(inst, e)] = std::string(1, side_letter(s));
  json doc;
  doc["assignment"] = obj;
  return doc.dump(2) + "\n";
}

RotationSystem load_rotation_system(const Instance& inst, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw InstanceError(std::string("parse error: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("rotations") || !doc["rotations"].is_object())
    throw InstanceError("rotation file must contain a \"rotations\" object");
  RotationSystem rot;
  for (const auto& [name, arr] : doc["rotations"].items()) {
    const VertexId v = inst.id_of(name);
    std::vector<Edge> list;
    for (const auto& nb : arr) list.emplace_back(v, inst.id_of(nb.get<std::string>()));
    rot[v] = std::move(list);
  }
  return rot;
}

std::string serialize_rotation_system(const Instance& inst, const RotationSystem& rot) {
  json obj = json::object();
  for (const auto& [v, list] : rot) {
    if (list.empty()) continue;
    json arr = json::array();
    for (const Edge& e : list) arr.push_back(inst.names[e.other(v)]);
    obj[inst.names[v]] = arr;
  }
  json doc;
  doc["rotations"] = obj;
  return doc.dump(2) + "\n";
}

RotationSystem rotation_from_assignment(const Instance& inst, const SideAssignment& a) {
  if (!inst.cycle) throw InstanceError("side assignments are defined on cycle instances");
  if (!inst.isolated.empty())
    throw InstanceError("rotation_from_assignment requires every vertex on the cycle");
  Verdict check = check_assignment(inst, a);
  if (!check.feasible) throw InstanceError("assignment is infeasible; no rotation realizes it");

  const auto& cyc = *inst.cycle;
  const int n = static_cast<int>(cyc.size());
  RotationSystem rot;
  for (int p = 0; p < n; ++p) {
    const VertexId v = cyc[p];
    const VertexId nxt = cyc[(p + 1) % n];
    const VertexId prv = cyc[(p + n - 1) % n];
    std::vector<std::pair<int, Edge>> left, right;  // (forward distance, edge)
    for (int g = 0; g < inst.k; ++g)
      for (const Edge& e : inst.exclusive[g]) {
        if (!e.touches(v)) continue;
        const int d = (inst.cycle_pos[e.other(v)] - p + n) % n;
        (a.at(e) == Side::Left ? left : right).push_back({d, e});
      }
    // Counterclockwise with the cycle drawn counterclockwise (Left inside):
    // to-next, inside chords by increasing forward distance, to-prev, outside
    // chords by decreasing forward distance.
    std::sort(left.begin(), left.end());
    std::sort(right.rbegin(), right.rend());
    std::vector<Edge> list;
    list.emplace_back(v, nxt);
    for (const auto& [d, e] : left) list.push_back(e);
    list.emplace_back(v, prv);
    for (const auto& [d, e] : right) list.push_back(e);
    rot[v] = std::move(list);
  }
  return rot;
}

}  // namespace orthosefe
