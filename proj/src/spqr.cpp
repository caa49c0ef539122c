#include "orthosefe/spqr.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "orthosefe/cyclesolver.hpp"

namespace orthosefe {

namespace {

// Planar rotation system of a simple graph on vertices 0..n-1, or nullopt.
std::optional<std::vector<std::vector<int>>> planar_rotation(
    int n, const std::vector<std::pair<int, int>>& edges) {
  using Graph =
      boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                            boost::property<boost::edge_index_t, int>>;
  Graph g(n);
  for (const auto& [a, b] : edges) boost::add_edge(a, b, g);
  int idx = 0;
  for (auto [ei, ee] = boost::edges(g); ei != ee; ++ei) boost::put(boost::edge_index, g, *ei, idx++);
  using ED = boost::graph_traits<Graph>::edge_descriptor;
  std::vector<std::vector<ED>> emb(std::max(n, 1));
  if (!boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = g,
                                           boost::boyer_myrvold_params::embedding = emb.data()))
    return std::nullopt;
  std::vector<std::vector<int>> rot(n);
  for (int v = 0; v < n; ++v)
    for (const ED& e : emb[v]) {
      int s = static_cast<int>(boost::source(e, g));
      int t = static_cast<int>(boost::target(e, g));
      rot[v].push_back(s == v ? t : s);
    }
  return rot;
}

using Dart = std::pair<int, int>;
using FaceWalk = std::vector<Dart>;

// Faces of a connected simple rotation system (each dart on exactly one face).
std::vector<FaceWalk> trace_faces(const std::vector<std::vector<int>>& rot) {
  std::map<Dart, int> pos;
  for (int u = 0; u < (int)rot.size(); ++u)
    for (int i = 0; i < (int)rot[u].size(); ++i) pos[{u, rot[u][i]}] = i;
  std::set<Dart> seen;
  std::vector<FaceWalk> out;
  for (int u = 0; u < (int)rot.size(); ++u)
    for (int w : rot[u]) {
      if (seen.count({u, w})) continue;
      FaceWalk f;
      int cu = u, cw = w;
      while (!seen.count({cu, cw})) {
        seen.insert({cu, cw});
        f.push_back({cu, cw});
        int p = pos.at({cw, cu});
        int nx = rot[cw][(p + 1) % rot[cw].size()];
        cu = cw;
        cw = nx;
      }
      out.push_back(std::move(f));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Tree construction. Works on a pool of edges; every edge is either a real
// shared edge or one half of a twin-linked virtual pair.
// ---------------------------------------------------------------------------

struct GEdge {
  VertexId u = -1, v = -1;
  int real = -1;  // index into inst.shared, or -1
  int link = -1;  // virtual pair id, or -1
};

struct WorkNode {
  NodeKind kind = NodeKind::S;
  std::vector<int> eids;
  bool dead = false;
};

struct Builder {
  std::vector<GEdge> gedges;
  std::vector<WorkNode> wnodes;
  int next_link = 0;

  int add_gedge(VertexId u, VertexId v, int real, int link) {
    gedges.push_back({u, v, real, link});
    return (int)gedges.size() - 1;
  }

  void add_node(NodeKind k, std::vector<int> eids) { wnodes.push_back({k, std::move(eids), false}); }

  // Connected classes of `eids` after removing vertices a and b, ordered by
  // smallest member edge. Two edges are together iff linked through a vertex
  // other than a and b.
  std::vector<std::vector<int>> split_classes(const std::vector<int>& eids, VertexId a, VertexId b) {
    int m = (int)eids.size();
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::map<VertexId, int> first_at;
    for (int p = 0; p < m; ++p) {
      const GEdge& e = gedges[eids[p]];
      for (VertexId w : {e.u, e.v}) {
        if (w == a || w == b) continue;
        auto it = first_at.find(w);
        if (it == first_at.end())
          first_at[w] = p;
        else
          parent[find(p)] = find(it->second);
      }
    }
    std::map<int, std::vector<int>> by_root;
    for (int p = 0; p < m; ++p) by_root[find(p)].push_back(eids[p]);
    std::vector<std::vector<int>> classes;
    for (auto& [r, cls] : by_root) classes.push_back(std::move(cls));
    std::sort(classes.begin(), classes.end(),
              [](const std::vector<int>& x, const std::vector<int>& y) {
                return *std::min_element(x.begin(), x.end()) < *std::min_element(y.begin(), y.end());
              });
    return classes;
  }

  static bool qualifies(const std::vector<std::vector<int>>& classes) {
    if (classes.size() >= 3) return true;
    return classes.size() == 2 && classes[0].size() >= 2 && classes[1].size() >= 2;
  }

  void decompose(std::vector<int> eids) {
    std::set<VertexId> vs;
    for (int id : eids) {
      vs.insert(gedges[id].u);
      vs.insert(gedges[id].v);
    }
    if (vs.size() < 2 || eids.empty()) throw InternalCheckError("degenerate decomposition part");
    if (vs.size() == 2) {  // all edges parallel: a bond
      add_node(NodeKind::P, std::move(eids));
      return;
    }
    std::map<VertexId, int> deg;
    for (int id : eids) {
      deg[gedges[id].u]++;
      deg[gedges[id].v]++;
    }
    bool all2 = std::all_of(deg.begin(), deg.end(), [](const auto& kv) { return kv.second == 2; });
    if (all2) {
      if (eids.size() != vs.size()) throw InternalCheckError("disconnected decomposition part");
      add_node(NodeKind::S, std::move(eids));
      return;
    }
    std::vector<VertexId> vlist(vs.begin(), vs.end());
    for (size_t i = 0; i < vlist.size(); ++i)
      for (size_t j = i + 1; j < vlist.size(); ++j) {
        VertexId a = vlist[i], b = vlist[j];
        auto classes = split_classes(eids, a, b);
        if (!qualifies(classes)) continue;
        if (classes.size() == 2) {
          int link = next_link++;
          classes[0].push_back(add_gedge(a, b, -1, link));
          classes[1].push_back(add_gedge(a, b, -1, link));
          decompose(std::move(classes[0]));
          decompose(std::move(classes[1]));
          return;
        }
        std::vector<int> hub;
        for (auto& cls : classes) {
          if (cls.size() == 1) {
            hub.push_back(cls[0]);
            continue;
          }
          int link = next_link++;
          cls.push_back(add_gedge(a, b, -1, link));
          hub.push_back(add_gedge(a, b, -1, link));
          decompose(std::move(cls));
        }
        add_node(NodeKind::P, std::move(hub));
        return;
      }
    add_node(NodeKind::R, std::move(eids));  // no split pair: three-connected
  }

  // link id -> the (exactly two) edges carrying it, in node/slot scan order.
  std::map<int, std::vector<int>> link_pairs() const {
    std::map<int, std::vector<int>> by_link;
    for (const WorkNode& w : wnodes) {
      if (w.dead) continue;
      for (int id : w.eids)
        if (gedges[id].link >= 0) by_link[gedges[id].link].push_back(id);
    }
    for (const auto& [l, ids] : by_link)
      if (ids.size() != 2) throw InternalCheckError("virtual edge pairing broken");
    return by_link;
  }

  int owner_of(int eid) const {
    for (int n = 0; n < (int)wnodes.size(); ++n) {
      if (wnodes[n].dead) continue;
      for (int id : wnodes[n].eids)
        if (id == eid) return n;
    }
    throw InternalCheckError("edge without an owner");
  }

  void merge_same_kind() {
    bool changed = true;
    while (changed) {
      changed = false;
      auto pairs = link_pairs();
      for (const auto& [link, ids] : pairs) {
        int n1 = owner_of(ids[0]), n2 = owner_of(ids[1]);
        if (n1 == n2) throw InternalCheckError("virtual edge twinned inside one node");
        NodeKind k1 = wnodes[n1].kind, k2 = wnodes[n2].kind;
        if (k1 != k2 || (k1 != NodeKind::S && k1 != NodeKind::P)) continue;
        auto drop = [&](int node, int eid) {
          auto& v = wnodes[node].eids;
          v.erase(std::find(v.begin(), v.end(), eid));
        };
        drop(n1, ids[0]);
        drop(n2, ids[1]);
        for (int id : wnodes[n2].eids) wnodes[n1].eids.push_back(id);
        wnodes[n2].eids.clear();
        wnodes[n2].dead = true;
        changed = true;
        break;
      }
    }
  }

  void attach_edge_nodes() {
    int count = (int)wnodes.size();
    for (int n = 0; n < count; ++n) {
      if (wnodes[n].dead) continue;
      std::vector<int> eids = wnodes[n].eids;  // copy: we append nodes below
      for (int eid : eids) {
        const GEdge ge = gedges[eid];  // copy: add_gedge may grow the pool
        if (ge.real < 0) continue;
        int link = next_link++;
        int qr = add_gedge(ge.u, ge.v, ge.real, -1);
        int qv = add_gedge(ge.u, ge.v, -1, link);
        gedges[eid].real = -1;
        gedges[eid].link = link;
        add_node(NodeKind::Q, {qr, qv});
      }
    }
  }

  void separate_adjacent_rigid() {
    auto pairs = link_pairs();
    for (const auto& [link, ids] : pairs) {
      int n1 = owner_of(ids[0]), n2 = owner_of(ids[1]);
      NodeKind k1 = wnodes[n1].kind, k2 = wnodes[n2].kind;
      auto pr = [](NodeKind k) { return k == NodeKind::P || k == NodeKind::R; };
      if (!pr(k1) || !pr(k2)) continue;
      int l1 = next_link++, l2 = next_link++;
      const GEdge ge = gedges[ids[0]];  // copy: add_gedge may grow the pool
      int s1 = add_gedge(ge.u, ge.v, -1, l1);
      int s2 = add_gedge(ge.u, ge.v, -1, l2);
      add_node(NodeKind::S, {s1, s2});
      gedges[ids[0]].link = l1;
      gedges[ids[1]].link = l2;
    }
  }

  SpqrTree emit(const Instance& inst) const {
    std::vector<int> rename(wnodes.size(), -1);
    int nn = 0;
    for (int i = 0; i < (int)wnodes.size(); ++i)
      if (!wnodes[i].dead) rename[i] = nn++;
    std::map<int, std::pair<int, int>> where;  // eid -> (node, slot)
    for (int i = 0; i < (int)wnodes.size(); ++i) {
      if (wnodes[i].dead) continue;
      for (int s = 0; s < (int)wnodes[i].eids.size(); ++s) where[wnodes[i].eids[s]] = {rename[i], s};
    }
    auto pairs = link_pairs();
    SpqrTree t;
    t.nodes.resize(nn);
    for (int i = 0; i < (int)wnodes.size(); ++i) {
      if (wnodes[i].dead) continue;
      SpqrNode& nd = t.nodes[rename[i]];
      nd.kind = wnodes[i].kind;
      for (int eid : wnodes[i].eids) {
        const GEdge& ge = gedges[eid];
        SkelEdge se;
        se.e = Edge(ge.u, ge.v);
        if (ge.link >= 0) {
          const auto& ids = pairs.at(ge.link);
          int other = ids[0] == eid ? ids[1] : ids[0];
          auto [tn, ts] = where.at(other);
          se.twin_node = tn;
          se.twin_slot = ts;
        }
        nd.skeleton.push_back(se);
      }
    }
    (void)inst;
    return t;
  }
};

void expand_rec(const SpqrTree& t, int node, int skip_slot, std::vector<Edge>& out) {
  const SpqrNode& nd = t.nodes[node];
  for (int s = 0; s < (int)nd.skeleton.size(); ++s) {
    if (s == skip_slot) continue;
    const SkelEdge& se = nd.skeleton[s];
    if (se.twin_node < 0)
      out.push_back(se.e);
    else
      expand_rec(t, se.twin_node, se.twin_slot, out);
  }
}

std::vector<std::pair<int, Edge>> exclusive_at(const Instance& inst, VertexId v) {
  std::vector<std::pair<int, Edge>> out;
  for (int g = 0; g < inst.k; ++g)
    for (const Edge& e : inst.exclusive[g])
      if (e.touches(v)) out.push_back({g, e});
  return out;
}

}  // namespace

SpqrTree build_spqr(const Instance& inst) {
  if (inst.vertex_count() < 3 || inst.shared.size() < 3)
    throw InstanceError("the decomposition requires a biconnected shared graph on at least three vertices");
  Builder b;
  std::vector<int> top;
  for (int i = 0; i < (int)inst.shared.size(); ++i)
    top.push_back(b.add_gedge(inst.shared[i].u, inst.shared[i].v, i, -1));
  b.decompose(std::move(top));
  b.merge_same_kind();
  b.attach_edge_nodes();
  b.separate_adjacent_rigid();
  return b.emit(inst);
}

std::vector<Edge> expansion_edges(const SpqrTree& t, int node, int slot) {
  const SkelEdge& se = t.nodes.at(node).skeleton.at(slot);
  std::vector<Edge> out;
  if (se.twin_node < 0)
    out.push_back(se.e);
  else
    expand_rec(t, se.twin_node, se.twin_slot, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> expansion_vertices(const SpqrTree& t, int node, int slot) {
  const Edge pe = t.nodes.at(node).skeleton.at(slot).e;
  std::set<VertexId> vs;
  for (const Edge& e : expansion_edges(t, node, slot)) {
    vs.insert(e.u);
    vs.insert(e.v);
  }
  vs.erase(pe.u);
  vs.erase(pe.v);
  return std::vector<VertexId>(vs.begin(), vs.end());
}

std::string dump_spqr(const Instance& inst, const SpqrTree& tree) {
  std::ostringstream os;
  auto kc = [](NodeKind k) {
    switch (k) {
      case NodeKind::S: return 'S';
      case NodeKind::P: return 'P';
      case NodeKind::R: return 'R';
      default: return 'Q';
    }
  };
  std::vector<char> seen(tree.nodes.size(), 0);
  std::function<void(int, int)> go = [&](int node, int depth) {
    seen[node] = 1;
    const SpqrNode& nd = tree.nodes[node];
    os << std::string(depth * 2, ' ') << kc(nd.kind) << node << " [";
    for (int s = 0; s < (int)nd.skeleton.size(); ++s) {
      const SkelEdge& se = nd.skeleton[s];
      if (s) os << ", ";
      os << inst.name_of(se.e.u) << "-" << inst.name_of(se.e.v);
      if (se.twin_node >= 0) os << "~";
    }
    os << "]\n";
    for (const SkelEdge& se : nd.skeleton)
      if (se.twin_node >= 0 && !seen[se.twin_node]) go(se.twin_node, depth + 1);
  };
  int root = -1;
  for (int i = 0; i < (int)tree.nodes.size() && root < 0; ++i)
    if (tree.nodes[i].kind != NodeKind::Q) root = i;
  if (root < 0 && !tree.nodes.empty()) root = 0;
  if (root >= 0) go(root, 0);
  for (int i = 0; i < (int)tree.nodes.size(); ++i)
    if (!seen[i]) go(i, 0);
  return os.str();
}

namespace {

struct RimResult {
  bool ok = true;
  std::string reason;
  std::vector<VertexId> cw, ccw;
};

// Order of the attachments along the two faces of a segment when the segment
// is embedded with both poles and all attachments on one face: realized by
// testing planarity of the segment plus an apex joined to the poles and every
// attachment. The apex rotation, read from pole_a, lists one side's
// attachments up to pole_b and then the other side's back to pole_a.
RimResult rim_order(const std::vector<Edge>& behind_edges, VertexId pole_a, VertexId pole_b,
                    const std::vector<VertexId>& atts) {
  RimResult res;
  std::map<VertexId, int> loc;
  std::vector<VertexId> rev;
  auto idx = [&](VertexId v) {
    auto it = loc.find(v);
    if (it != loc.end()) return it->second;
    int k = (int)rev.size();
    loc[v] = k;
    rev.push_back(v);
    return k;
  };
  std::vector<std::pair<int, int>> bedges;
  for (const Edge& e : behind_edges) bedges.emplace_back(idx(e.u), idx(e.v));
  int ia = idx(pole_a), ib = idx(pole_b);
  std::vector<int> iat;
  for (VertexId v : atts) iat.push_back(idx(v));
  int apex = (int)rev.size();
  bedges.emplace_back(apex, ia);
  bedges.emplace_back(apex, ib);
  for (int t : iat) bedges.emplace_back(apex, t);
  auto rot = planar_rotation(apex + 1, bedges);
  if (!rot) {
    res.ok = false;
    res.reason = "attachment not embeddable on the required outer face";
    return res;
  }
  std::vector<int> ar = (*rot)[apex];
  auto it = std::find(ar.begin(), ar.end(), ia);
  if (it == ar.end()) throw InternalCheckError("apex rotation lost a pole");
  std::rotate(ar.begin(), it, ar.end());
  auto bt = std::find(ar.begin(), ar.end(), ib);
  if (bt == ar.end()) throw InternalCheckError("apex rotation lost a pole");
  for (auto p = ar.begin() + 1; p != bt; ++p) res.cw.push_back(rev[*p]);
  for (auto p = bt + 1; p != ar.end(); ++p) res.ccw.push_back(rev[*p]);
  return res;
}

// Canonical ring of a series skeleton: starts at the smallest vertex, walks
// toward its smaller neighbour (smaller slot on a two-edge ring). Returns the
// vertex order plus the slot used by each ring edge.
std::pair<std::vector<VertexId>, std::vector<int>> series_ring(const SpqrNode& nd) {
  std::map<VertexId, std::vector<int>> at;
  for (int s = 0; s < (int)nd.skeleton.size(); ++s) {
    at[nd.skeleton[s].e.u].push_back(s);
    at[nd.skeleton[s].e.v].push_back(s);
  }
  for (const auto& [v, slots] : at)
    if (slots.size() != 2) throw InternalCheckError("series skeleton is not a cycle");
  int m = (int)nd.skeleton.size();
  std::vector<VertexId> ring;
  std::vector<int> slot_order;
  std::vector<char> used(m, 0);
  VertexId start = at.begin()->first;
  VertexId cur = start;
  for (int step = 0; step < m; ++step) {
    int pick = -1;
    for (int s : at.at(cur)) {
      if (used[s]) continue;
      if (pick < 0) {
        pick = s;
        continue;
      }
      VertexId np = nd.skeleton[pick].e.other(cur);
      VertexId ns = nd.skeleton[s].e.other(cur);
      if (ns < np || (ns == np && s < pick)) pick = s;
    }
    if (pick < 0) throw InternalCheckError("series ring walk failed");
    used[pick] = 1;
    ring.push_back(cur);
    slot_order.push_back(pick);
    cur = nd.skeleton[pick].e.other(cur);
  }
  if (cur != start) throw InternalCheckError("series ring does not close");
  return {ring, slot_order};
}

// Vertex partition induced by one series node: -1 for ring vertices, the
// segment index for vertices behind a virtual ring edge.
std::vector<int> segment_parts(const Instance& inst, const SNodeInstance& sn) {
  std::vector<int> part(inst.vertex_count(), -2);
  for (VertexId v : sn.ring) part[v] = -1;
  for (int si = 0; si < (int)sn.segments.size(); ++si)
    for (VertexId v : sn.segments[si].behind) {
      if (part[v] != -2) throw InternalCheckError("decomposition does not partition the graph");
      part[v] = si;
    }
  for (int v = 0; v < inst.vertex_count(); ++v)
    if (part[v] == -2) throw InternalCheckError("the decomposition does not cover every vertex");
  return part;
}

}  // namespace

ExtractResult extract_snode_instances(const Instance& inst, const SpqrTree& tree) {
  ExtractResult res;
  for (int ni = 0; ni < (int)tree.nodes.size(); ++ni) {
    const SpqrNode& nd = tree.nodes[ni];
    if (nd.kind != NodeKind::S) continue;
    SNodeInstance sn;
    sn.node = ni;
    auto [ring, slot_order] = series_ring(nd);
    sn.ring = ring;
    int m = (int)ring.size();
    std::vector<int> segslot;
    for (int i = 0; i < m; ++i) {
      int s = slot_order[i];
      const SkelEdge& se = nd.skeleton[s];
      if (se.twin_node < 0) throw InternalCheckError("series skeleton carries an untwinned edge");
      if (tree.nodes[se.twin_node].kind == NodeKind::Q) {
        sn.segment_of.push_back(-1);
        continue;
      }
      VirtualSegment seg;
      seg.pole_a = ring[i];
      seg.pole_b = ring[(i + 1) % m];
      seg.behind = expansion_vertices(tree, ni, s);
      sn.segment_of.push_back((int)sn.segments.size());
      sn.segments.push_back(std::move(seg));
      segslot.push_back(s);
    }
    std::vector<int> part = segment_parts(inst, sn);
    std::vector<std::set<VertexId>> attsets(sn.segments.size());
    for (int g = 0; g < inst.k; ++g)
      for (const Edge& e : inst.exclusive[g]) {
        int pu = part[e.u], pv = part[e.v];
        if (pu == pv && pu >= 0) continue;  // strictly inside one segment
        if (pu >= 0) attsets[pu].insert(e.u);
        if (pv >= 0) attsets[pv].insert(e.v);
      }
    for (int si = 0; si < (int)sn.segments.size(); ++si) {
      VirtualSegment& seg = sn.segments[si];
      std::vector<VertexId> atts(attsets[si].begin(), attsets[si].end());
      RimResult rim =
          rim_order(expansion_edges(tree, ni, segslot[si]), seg.pole_a, seg.pole_b, atts);
      if (!rim.ok) {
        res.feasible = false;
        res.reason = "segment " + inst.name_of(seg.pole_a) + "-" + inst.name_of(seg.pole_b) +
                     ": " + rim.reason;
        return res;
      }
      seg.side_cw = rim.cw;
      seg.side_ccw = rim.ccw;
    }
    res.snodes.push_back(std::move(sn));
  }
  return res;
}

Flattened flatten_cycle(const Instance& inst, const SNodeInstance& s, bool variant) {
  if (inst.k != 2) throw InstanceError("flattening requires exactly two graphs");
  std::vector<int> part = segment_parts(inst, s);
  std::set<std::string> used(inst.names.begin(), inst.names.end());
  auto fresh = [&](std::string b) {
    while (used.count(b)) b = "@" + b;
    used.insert(b);
    return b;
  };
  std::vector<std::string> cyc;
  std::vector<std::vector<NamePair>> ex(2);
  int m = (int)s.ring.size();
  for (int i = 0; i < m; ++i) {
    cyc.push_back(inst.name_of(s.ring[i]));
    int si = s.segment_of[i];
    if (si < 0) continue;
    const VirtualSegment& sg = s.segments[si];
    std::string p = "seg" + std::to_string(si) + ".";
    std::string a1 = fresh(p + "a1"), a2 = fresh(p + "a2");
    std::string x1 = fresh(p + "x1"), x2 = fresh(p + "x2"), x3 = fresh(p + "x3"),
                x4 = fresh(p + "x4");
    std::string b1 = fresh(p + "b1"), b2 = fresh(p + "b2");
    cyc.push_back(a1);
    cyc.push_back(a2);
    for (VertexId v : sg.side_cw) cyc.push_back(inst.name_of(v));
    cyc.push_back(x1);
    cyc.push_back(x2);
    cyc.push_back(x3);
    cyc.push_back(x4);
    for (auto it = sg.side_ccw.rbegin(); it != sg.side_ccw.rend(); ++it)
      cyc.push_back(inst.name_of(*it));
    cyc.push_back(b1);
    cyc.push_back(b2);
    // One chord component per side of the segment; the shared chord pattern
    // pins every attachment edge of a side to one value of the free flip.
    ex[0].push_back({a2, x3});
    ex[0].push_back({x1, x3});
    ex[0].push_back({x2, x4});
    ex[0].push_back({x2, b1});
    ex[1].push_back({a1, variant ? x4 : x3});
    ex[1].push_back({x2, b2});
  }
  std::vector<std::pair<int, Edge>> carried;
  for (int g = 0; g < 2; ++g)
    for (const Edge& e : inst.exclusive[g]) {
      int pu = part[e.u], pv = part[e.v];
      if (pu == pv && pu >= 0) continue;
      ex[g].push_back({inst.name_of(e.u), inst.name_of(e.v)});
      carried.push_back({g, e});
    }
  Flattened out{make_cycle_instance(cyc, ex), {}, {}};
  for (const auto& [g, e] : carried) {
    Edge fe(out.instance.id_of(inst.name_of(e.u)), out.instance.id_of(inst.name_of(e.v)));
    out.to_flat[e] = fe;
    out.from_flat[fe] = e;
  }
  return out;
}

namespace {

// Index of the unique slot of `node` whose expansion contains vertex t.
int slot_containing(const SpqrTree& tree, int node, VertexId t) {
  int found = -1;
  for (int s = 0; s < (int)tree.nodes[node].skeleton.size(); ++s) {
    auto vs = expansion_vertices(tree, node, s);
    if (std::binary_search(vs.begin(), vs.end(), t)) {
      if (found >= 0) throw InternalCheckError("vertex behind two skeleton edges");
      found = s;
    }
  }
  return found;
}

// The unique real edge at u inside the expansion of the given slot.
Edge attachment_edge(const SpqrTree& tree, int node, int slot, VertexId u) {
  Edge found(0, 1);
  int cnt = 0;
  for (const Edge& e : expansion_edges(tree, node, slot))
    if (e.touches(u)) {
      found = e;
      ++cnt;
    }
  if (cnt != 1) throw InternalCheckError("branch attachment is not a single edge");
  return found;
}

}  // namespace

NormalizeResult normalize_attachments(const Instance& inst) {
  if (inst.k != 2) throw InstanceError("attachment normalization requires exactly two graphs");
  NormalizeResult res{inst, true, "planarity", "", {}, {}};
  Instance cur = inst;
  int guard = 4 * inst.vertex_count() + 64;
  while (true) {
    if (--guard < 0) throw InternalCheckError("attachment normalization did not converge");
    VertexId u = -1;
    for (VertexId v = 0; v < cur.vertex_count() && u < 0; ++v) {
      auto ex = exclusive_at(cur, v);
      if (ex.empty()) continue;
      int sd = cur.shared_degree(v);
      if (sd >= 4) {
        res.feasible = false;
        res.kind = "orthogonality";
        res.reason =
            "vertex \"" + cur.name_of(v) + "\" has four shared edges and an exclusive edge";
        res.instance = cur;
        return res;
      }
      if (sd == 3) u = v;
    }
    if (u < 0) break;

    SpqrTree tree = build_spqr(cur);
    int mu = -1;
    for (int n = 0; n < (int)tree.nodes.size(); ++n) {
      int d = 0;
      for (const SkelEdge& se : tree.nodes[n].skeleton)
        if (se.e.touches(u)) ++d;
      if (d == 3) {
        if (mu >= 0) throw InternalCheckError("two branch nodes for one vertex");
        mu = n;
      }
    }
    if (mu < 0) throw InternalCheckError("no branch node for a degree-three vertex");
    const SpqrNode& nd = tree.nodes[mu];
    auto ex_u = exclusive_at(cur, u);

    int chosen_slot = -1;
    if (nd.kind == NodeKind::P) {
      VertexId w = nd.skeleton[0].e.other(u);
      bool all_intra = true;
      for (const auto& [g, e] : ex_u)
        if (e.other(u) != w) all_intra = false;
      if (all_intra) {
        // Guides: exclusive edges at either pole that leave the pole pair.
        Edge guide(0, 1);
        bool have_guide = false;
        for (VertexId p : {u, w})
          for (const auto& [g, e] : exclusive_at(cur, p)) {
            VertexId t = e.other(p);
            if (t == u || t == w) continue;
            if (!have_guide || e < guide) {
              guide = e;
              have_guide = true;
            }
          }
        if (!have_guide) {
          // No structure prefers a branch: set the pole-to-pole edges aside
          // and reinsert them into whatever rotation the solver assembles.
          std::vector<std::vector<NamePair>> ex2(2);
          for (int g = 0; g < 2; ++g)
            for (const Edge& e : cur.exclusive[g]) {
              if (e.touches(u) && e.other(u) == w) {
                std::string an = cur.name_of(e.u), bn = cur.name_of(e.v);
                if (bn < an) std::swap(an, bn);
                res.removed.push_back({{an, bn}, g});
                continue;
              }
              ex2[g].push_back({cur.name_of(e.u), cur.name_of(e.v)});
            }
          std::vector<NamePair> sh;
          for (const Edge& e : cur.shared) sh.push_back({cur.name_of(e.u), cur.name_of(e.v)});
          cur = make_shared_instance(cur.names, sh, ex2);
          continue;
        }
        VertexId t = guide.u == u || guide.u == w ? guide.v : guide.u;
        chosen_slot = slot_containing(tree, mu, t);
      } else {
        Edge pick(0, 1);
        bool have = false;
        for (const auto& [g, e] : ex_u) {
          if (e.other(u) == w) continue;
          if (!have || e < pick) {
            pick = e;
            have = true;
          }
        }
        chosen_slot = slot_containing(tree, mu, pick.other(u));
      }
      if (chosen_slot < 0) throw InternalCheckError("no branch holds the attachment target");
    } else if (nd.kind == NodeKind::R) {
      // Work on the rigid skeleton's (unique) planar embedding.
      std::map<VertexId, int> loc;
      std::vector<VertexId> rev;
      auto idx = [&](VertexId v) {
        auto it = loc.find(v);
        if (it != loc.end()) return it->second;
        int k = (int)rev.size();
        loc[v] = k;
        rev.push_back(v);
        return k;
      };
      std::vector<std::pair<int, int>> ledges;
      for (const SkelEdge& se : nd.skeleton) ledges.emplace_back(idx(se.e.u), idx(se.e.v));
      auto rotopt = planar_rotation((int)rev.size(), ledges);
      if (!rotopt) throw InternalCheckError("rigid skeleton is not planar");
      auto faces = trace_faces(*rotopt);
      int lu = loc.at(u);
      auto face_has_vertex = [&](const FaceWalk& f, int x) {
        for (const Dart& d : f)
          if (d.first == x) return true;
        return false;
      };
      auto face_has_edge = [&](const FaceWalk& f, int a, int b) {
        for (const Dart& d : f)
          if ((d.first == a && d.second == b) || (d.first == b && d.second == a)) return true;
        return false;
      };
      // A face qualifies when it sees u and, for every exclusive edge at u,
      // the edge's target vertex or the skeleton edge hiding it.
      std::vector<int> cand;
      for (int fi = 0; fi < (int)faces.size(); ++fi) {
        if (!face_has_vertex(faces[fi], lu)) continue;
        bool ok = true;
        for (const auto& [g, e] : ex_u) {
          VertexId t = e.other(u);
          auto lt = loc.find(t);
          if (lt != loc.end()) {
            if (!face_has_vertex(faces[fi], lt->second)) ok = false;
          } else {
            int s = slot_containing(tree, mu, t);
            if (s < 0) throw InternalCheckError("no skeleton edge hides the attachment target");
            const Edge& se = nd.skeleton[s].e;
            if (!face_has_edge(faces[fi], loc.at(se.u), loc.at(se.v))) ok = false;
          }
          if (!ok) break;
        }
        if (ok) cand.push_back(fi);
      }
      if (cand.empty()) {
        res.feasible = false;
        res.kind = "planarity";
        res.reason = "no face of the rigid structure can host the exclusive edges at \"" +
                     cur.name_of(u) + "\"";
        res.instance = cur;
        return res;
      }
      auto corners = [&](int fi) {
        std::set<int> out;
        for (const Dart& d : faces[fi]) {
          if (d.first == lu) out.insert(d.second);
          if (d.second == lu) out.insert(d.first);
        }
        return out;  // local neighbour vertices of the face's corner at u
      };
      auto slot_of_local = [&](int a, int b) {
        for (int s = 0; s < (int)nd.skeleton.size(); ++s) {
          const Edge& e = nd.skeleton[s].e;
          if ((loc.at(e.u) == a && loc.at(e.v) == b) || (loc.at(e.u) == b && loc.at(e.v) == a))
            return s;
        }
        throw InternalCheckError("corner edge missing from skeleton");
      };
      if (cand.size() == 2) {
        auto c1 = corners(cand[0]), c2 = corners(cand[1]);
        std::vector<int> common;
        std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(),
                              std::back_inserter(common));
        if (common.size() != 1)
          throw InternalCheckError("adjacent faces without a unique shared corner");
        chosen_slot = slot_of_local(lu, common[0]);
      } else {
        // A single hosting face (or, in tiny skeletons, every face): take the
        // lexicographically smaller of the face's two corner edges at u.
        auto c = corners(cand[0]);
        Edge best(0, 1);
        bool have = false;
        for (int nb : c) {
          int s = slot_of_local(lu, nb);
          if (!have || nd.skeleton[s].e < best) {
            best = nd.skeleton[s].e;
            chosen_slot = s;
            have = true;
          }
        }
      }
    } else {
      throw InternalCheckError("branch node is neither parallel nor rigid");
    }

    // Subdivide the selected real edge and move u's exclusive edges onto the
    // middle subdivision vertex, guarded by a shared chord.
    Edge realedge = attachment_edge(tree, mu, chosen_slot, u);
    VertexId x = realedge.other(u);
    std::string un = cur.name_of(u), xn = cur.name_of(x);
    std::set<std::string> used(cur.names.begin(), cur.names.end());
    auto fresh = [&](std::string b) {
      while (used.count(b)) b = "@" + b;
      used.insert(b);
      return b;
    };
    std::string w1 = fresh(un + ".w1"), w2 = fresh(un + ".w2"), w3 = fresh(un + ".w3");
    std::vector<std::string> vnames = cur.names;
    vnames.push_back(w1);
    vnames.push_back(w2);
    vnames.push_back(w3);
    std::vector<NamePair> sh;
    for (const Edge& e : cur.shared) {
      if (e == realedge) continue;
      sh.push_back({cur.name_of(e.u), cur.name_of(e.v)});
    }
    sh.push_back({un, w1});
    sh.push_back({w1, w2});
    sh.push_back({w2, w3});
    sh.push_back({w3, xn});
    sh.push_back({w1, w3});
    std::vector<std::vector<NamePair>> ex2(2);
    for (int g = 0; g < 2; ++g)
      for (const Edge& e : cur.exclusive[g]) {
        std::string an = cur.name_of(e.u), bn = cur.name_of(e.v);
        if (e.u == u) an = w2;
        if (e.v == u) bn = w2;
        ex2[g].push_back({an, bn});
      }
    res.subdivisions.push_back({un, xn, w1, w2, w3});
    cur = make_shared_instance(vnames, sh, ex2);
  }
  for (int g = 0; g < 2; ++g)
    for (const Edge& e : cur.exclusive[g])
      for (VertexId v : {e.u, e.v})
        if (cur.shared_degree(v) != 2)
          throw InternalCheckError("normalization left an attachment off a two-path");
  res.instance = cur;
  return res;
}

// ---------------------------------------------------------------------------
// Rotation assembly
// ---------------------------------------------------------------------------

namespace {

struct Frag {
  std::map<VertexId, std::vector<Edge>> rot;  // finished rotations, interior vertices
  std::map<VertexId, std::vector<Edge>> arc;  // dangling edge lists at the two poles
};

struct AssemblyContext {
  const Instance* N = nullptr;
  const SpqrTree* tree = nullptr;
  std::vector<std::map<VertexId, std::vector<int>>> slots_at;   // per node
  std::vector<std::map<VertexId, std::vector<int>>> rigid_rot;  // per R node
  std::vector<std::vector<std::vector<int>>> pperms;            // per P node
  int root = -1;

  // enumeration dimensions
  struct Dim {
    enum Kind { SFLIP, RMIRROR, PPERM } kind;
    int node;
    int count;
  };
  std::vector<Dim> dims;

  // insertion items: deg-2 ring vertices carrying exclusive edges
  struct Insertion {
    VertexId v;
    int snode;                    // owning series node
    std::vector<Edge> base;       // [to-next, left..., to-prev, right...]
  };
  std::vector<Insertion> insertions;
};

void build_assembly_context(AssemblyContext& ctx) {
  const SpqrTree& tree = *ctx.tree;
  int nn = (int)tree.nodes.size();
  ctx.slots_at.resize(nn);
  ctx.rigid_rot.resize(nn);
  ctx.pperms.resize(nn);
  for (int n = 0; n < nn; ++n) {
    const SpqrNode& nd = tree.nodes[n];
    for (int s = 0; s < (int)nd.skeleton.size(); ++s) {
      ctx.slots_at[n][nd.skeleton[s].e.u].push_back(s);
      ctx.slots_at[n][nd.skeleton[s].e.v].push_back(s);
    }
    if (nd.kind == NodeKind::R) {
      std::map<VertexId, int> loc;
      std::vector<VertexId> rev;
      auto idx = [&](VertexId v) {
        auto it = loc.find(v);
        if (it != loc.end()) return it->second;
        int k = (int)rev.size();
        loc[v] = k;
        rev.push_back(v);
        return k;
      };
      std::vector<std::pair<int, int>> ledges;
      for (const SkelEdge& se : nd.skeleton) ledges.emplace_back(idx(se.e.u), idx(se.e.v));
      auto rotopt = planar_rotation((int)rev.size(), ledges);
      if (!rotopt) throw InternalCheckError("rigid skeleton is not planar");
      std::map<std::pair<int, int>, int> slot_of;
      for (int s = 0; s < (int)nd.skeleton.size(); ++s) {
        int a = loc.at(nd.skeleton[s].e.u), b = loc.at(nd.skeleton[s].e.v);
        slot_of[{std::min(a, b), std::max(a, b)}] = s;
      }
      for (int lv = 0; lv < (int)rev.size(); ++lv) {
        std::vector<int>& lst = ctx.rigid_rot[n][rev[lv]];
        for (int nb : (*rotopt)[lv]) lst.push_back(slot_of.at({std::min(lv, nb), std::max(lv, nb)}));
      }
      ctx.dims.push_back({AssemblyContext::Dim::RMIRROR, n, 2});
    } else if (nd.kind == NodeKind::P) {
      int r = (int)nd.skeleton.size();
      std::vector<int> base(r);
      std::iota(base.begin(), base.end(), 0);
      auto& perms = ctx.pperms[n];
      if (r <= 5) {
        // The perm acts as a cyclic order (poles splice it anchored at the
        // virtual edge), so fixing the first slot removes an r-fold redundancy.
        std::vector<int> p = base;
        do {
          perms.push_back(p);
        } while (std::next_permutation(p.begin() + 1, p.end()));
      } else {
        perms.push_back(base);
        std::vector<int> rv = base;
        std::reverse(rv.begin() + 1, rv.end());
        perms.push_back(rv);
      }
      ctx.dims.push_back({AssemblyContext::Dim::PPERM, n, (int)perms.size()});
    }
  }
  for (int n = 0; n < nn && ctx.root < 0; ++n)
    if (tree.nodes[n].kind == NodeKind::S) ctx.root = n;
  for (int n = 0; n < nn && ctx.root < 0; ++n)
    if (tree.nodes[n].kind == NodeKind::R) ctx.root = n;
  for (int n = 0; n < nn && ctx.root < 0; ++n)
    if (tree.nodes[n].kind == NodeKind::P) ctx.root = n;
  if (ctx.root < 0) throw InternalCheckError("decomposition has no internal node");
}

struct CandidateConfig {
  std::map<int, bool> sflip;
  std::map<int, bool> rmirror;
  std::map<int, const std::vector<int>*> pperm;
};

RotationSystem compose_shared(const AssemblyContext& ctx, const CandidateConfig& cfg) {
  const SpqrTree& tree = *ctx.tree;
  auto order_at = [&](int node, VertexId v) -> std::vector<int> {
    const SpqrNode& nd = tree.nodes[node];
    switch (nd.kind) {
      case NodeKind::P: {
        const std::vector<int>& perm = *cfg.pperm.at(node);
        if (v == nd.skeleton[0].e.u) return perm;
        std::vector<int> r(perm.rbegin(), perm.rend());
        return r;
      }
      case NodeKind::R: {
        std::vector<int> lst = ctx.rigid_rot[node].at(v);
        if (cfg.rmirror.at(node)) std::reverse(lst.begin(), lst.end());
        return lst;
      }
      default:
        return ctx.slots_at[node].at(v);
    }
  };
  std::function<Frag(int, int)> build = [&](int node, int via) -> Frag {
    const SpqrNode& nd = tree.nodes[node];
    Frag f;
    if (nd.kind == NodeKind::Q) {
      const Edge& real = nd.skeleton[0].e;
      f.arc[real.u] = {real};
      f.arc[real.v] = {real};
      return f;
    }
    int ns = (int)nd.skeleton.size();
    std::vector<Frag> ch(ns);
    for (int s = 0; s < ns; ++s) {
      if (s == via) continue;
      const SkelEdge& se = nd.skeleton[s];
      if (se.twin_node < 0) throw InternalCheckError("untwinned skeleton edge in an inner node");
      ch[s] = build(se.twin_node, se.twin_slot);
      for (auto& [vv, lst] : ch[s].rot) f.rot[vv] = std::move(lst);
    }
    VertexId pa = -1, pb = -1;
    if (via >= 0) {
      pa = nd.skeleton[via].e.u;
      pb = nd.skeleton[via].e.v;
    }
    std::set<VertexId> vs;
    for (const SkelEdge& se : nd.skeleton) {
      vs.insert(se.e.u);
      vs.insert(se.e.v);
    }
    for (VertexId v : vs) {
      std::vector<int> ord = order_at(node, v);
      if (v == pa || v == pb) {
        auto it = std::find(ord.begin(), ord.end(), via);
        if (it == ord.end()) throw InternalCheckError("pole misses its outgoing slot");
        std::rotate(ord.begin(), it, ord.end());
        std::vector<Edge>& a = f.arc[v];
        for (size_t q = 1; q < ord.size(); ++q)
          for (const Edge& e : ch[ord[q]].arc.at(v)) a.push_back(e);
      } else {
        std::vector<Edge>& r = f.rot[v];
        for (int s : ord)
          for (const Edge& e : ch[s].arc.at(v)) r.push_back(e);
      }
    }
    return f;
  };
  Frag rootf = build(ctx.root, -1);
  RotationSystem rot;
  for (auto& [v, lst] : rootf.rot) rot[v] = std::move(lst);
  for (VertexId v = 0; v < ctx.N->vertex_count(); ++v)
    if (!rot.count(v)) throw InternalCheckError("assembled rotation misses a vertex");
  return rot;
}

// Undo one subdivision in name space: merge b into a, splicing b's rotation
// (read from just after a) into a's list at b's slot.
void contract_into(std::map<std::string, std::vector<std::string>>& nr, const std::string& a,
                   const std::string& b) {
  auto itb = nr.find(b);
  if (itb == nr.end()) throw InternalCheckError("contraction target missing");
  std::vector<std::string> lb = itb->second;
  auto pb = std::find(lb.begin(), lb.end(), a);
  if (pb == lb.end()) throw InternalCheckError("contraction edge missing");
  std::rotate(lb.begin(), pb, lb.end());
  std::vector<std::string> arc(lb.begin() + 1, lb.end());
  std::vector<std::string>& la = nr.at(a);
  auto pa = std::find(la.begin(), la.end(), b);
  if (pa == la.end()) throw InternalCheckError("contraction edge missing");
  size_t at = pa - la.begin();
  la.erase(pa);
  la.insert(la.begin() + at, arc.begin(), arc.end());
  for (const std::string& n : arc) {
    std::vector<std::string>& ln = nr.at(n);
    auto q = std::find(ln.begin(), ln.end(), b);
    if (q == ln.end()) throw InternalCheckError("contraction neighbour inconsistent");
    *q = a;
  }
  nr.erase(b);
}

bool reinsert_removed(const Instance& inst, RotationSystem& rot,
                      const std::vector<Edge>& removed, size_t at, long& budget) {
  if (at == removed.size()) {
    if (--budget < 0) throw InternalCheckError("edge reinsertion search exhausted its budget");
    return check_sefe_orthogonality(inst, rot).feasible;
  }
  const Edge e = removed[at];
  std::vector<Edge>& lu = rot.at(e.u);
  std::vector<Edge>& lv = rot.at(e.v);
  for (size_t i = 0; i <= lu.size(); ++i) {
    lu.insert(lu.begin() + i, e);
    for (size_t j = 0; j <= lv.size(); ++j) {
      lv.insert(lv.begin() + j, e);
      if (budget >= 0 && reinsert_removed(inst, rot, removed, at + 1, budget)) return true;
      lv.erase(lv.begin() + j);
    }
    lu.erase(lu.begin() + i);
  }
  return false;
}

}  // namespace

BiconnectedSolution solve_biconnected(const Instance& inst, bool gadget_variant) {
  BiconnectedSolution out;
  if (inst.k != 2) throw InstanceError("the biconnected solver requires exactly two graphs");
  if (!shared_graph_biconnected(inst))
    throw InstanceError("the biconnected solver requires a biconnected shared graph");
  {
    std::vector<std::pair<int, int>> se;
    for (const Edge& e : inst.shared) se.emplace_back(e.u, e.v);
    if (!planar_rotation(inst.vertex_count(), se)) {
      out.verdict.feasible = false;
      out.verdict.violations.push_back({"not-a-sefe", "the shared graph is not planar"});
      return out;
    }
  }

  NormalizeResult norm = normalize_attachments(inst);
  if (!norm.feasible) {
    out.verdict.feasible = false;
    out.verdict.violations.push_back({norm.kind, norm.reason});
    return out;
  }
  const Instance& N = norm.instance;

  SpqrTree tree = build_spqr(N);
  ExtractResult ext = extract_snode_instances(N, tree);
  if (!ext.feasible) {
    out.verdict.feasible = false;
    out.verdict.violations.push_back({"planarity", ext.reason});
    return out;
  }

  struct Solved {
    const SNodeInstance* sn;
    Flattened flat;
    RotationSystem flat_rot;
  };
  std::vector<Solved> solved;
  for (const SNodeInstance& sn : ext.snodes) {
    Flattened fl = flatten_cycle(N, sn, gadget_variant);
    CycleSolution cs = solve_cycle(fl.instance);
    if (!cs.verdict.feasible) {
      out.verdict.feasible = false;
      out.verdict.violations = cs.verdict.violations;
      if (out.verdict.violations.empty())
        out.verdict.violations.push_back(
            {"planarity", "a series component admits no side assignment"});
      return out;
    }
    RotationSystem fr = rotation_from_assignment(fl.instance, *cs.verdict.witness);
    solved.push_back({&sn, std::move(fl), std::move(fr)});
  }

  AssemblyContext ctx;
  ctx.N = &N;
  ctx.tree = &tree;
  build_assembly_context(ctx);

  // Insertion items: for every ring vertex owning exclusive edges, read the
  // two sides of its flattened witness rotation back into real edges.
  std::set<VertexId> seen_owned;
  for (int si = 0; si < (int)solved.size(); ++si) {
    const Solved& so = solved[si];
    const Instance& FI = so.flat.instance;
    const std::vector<VertexId>& ring = so.sn->ring;
    int m = (int)ring.size();
    for (int i = 0; i < m; ++i) {
      VertexId v = ring[i];
      if (N.shared_degree(v) != 2) continue;
      auto ex = exclusive_at(N, v);
      if (ex.empty()) continue;
      if (!seen_owned.insert(v).second)
        throw InternalCheckError("vertex owned by two series nodes");
      VertexId nxt = ring[(i + 1) % m], prv = ring[(i - 1 + m) % m];
      int fv = FI.id_of(N.name_of(v));
      Edge fnext(fv, FI.id_of(N.name_of(nxt)));
      Edge fprev(fv, FI.id_of(N.name_of(prv)));
      std::vector<Edge> lst = so.flat_rot.at(fv);
      auto it = std::find(lst.begin(), lst.end(), fnext);
      if (it == lst.end()) throw InternalCheckError("flat rotation misses the ring edge");
      std::rotate(lst.begin(), it, lst.end());
      auto pv = std::find(lst.begin(), lst.end(), fprev);
      if (pv == lst.end()) throw InternalCheckError("flat rotation misses the ring edge");
      size_t cut = pv - lst.begin();
      AssemblyContext::Insertion ins;
      ins.v = v;
      ins.snode = so.sn->node;
      ins.base.push_back(Edge(v, nxt));
      for (size_t q = 1; q < cut; ++q) ins.base.push_back(so.flat.from_flat.at(lst[q]));
      ins.base.push_back(Edge(v, prv));
      for (size_t q = cut + 1; q < lst.size(); ++q) ins.base.push_back(so.flat.from_flat.at(lst[q]));
      if (ins.base.size() != 2 + ex.size())
        throw InternalCheckError("witness rotation does not cover the exclusive edges");
      ctx.insertions.push_back(std::move(ins));
    }
  }
  {
    std::set<int> need;
    for (const auto& ins : ctx.insertions) need.insert(ins.snode);
    for (int n : need) ctx.dims.push_back({AssemblyContext::Dim::SFLIP, n, 2});
  }

  long total = 1;
  for (const auto& d : ctx.dims) {
    total *= d.count;
    if (total > 1000000) throw InternalCheckError("embedding search space too large");
  }

  std::vector<Edge> removed_edges;
  for (const auto& r : norm.removed)
    removed_edges.push_back(Edge(inst.id_of(r.e.first), inst.id_of(r.e.second)));

  for (long cand = 0; cand < total; ++cand) {
    CandidateConfig cfg;
    long c = cand;
    std::map<int, bool> sflip;
    for (const auto& d : ctx.dims) {
      int val = (int)(c % d.count);
      c /= d.count;
      switch (d.kind) {
        case AssemblyContext::Dim::SFLIP: sflip[d.node] = val != 0; break;
        case AssemblyContext::Dim::RMIRROR: cfg.rmirror[d.node] = val != 0; break;
        case AssemblyContext::Dim::PPERM: cfg.pperm[d.node] = &ctx.pperms[d.node][val]; break;
      }
    }
    RotationSystem rot;
    try {
      rot = compose_shared(ctx, cfg);
    } catch (const InternalCheckError&) {
      throw;
    }
    for (const auto& ins : ctx.insertions) {
      std::vector<Edge> lst = ins.base;
      if (sflip.count(ins.snode) && sflip.at(ins.snode)) std::reverse(lst.begin(), lst.end());
      rot[ins.v] = std::move(lst);
    }
    if (!check_sefe_orthogonality(N, rot).feasible) continue;

    // Undo the normalization subdivisions in name space, then go back to the
    // original instance's vertex ids.
    std::map<std::string, std::vector<std::string>> nr;
    for (const auto& [v, lst] : rot) {
      std::vector<std::string>& o = nr[N.name_of(v)];
      for (const Edge& e : lst) o.push_back(N.name_of(e.other(v)));
    }
    for (auto it = norm.subdivisions.rbegin(); it != norm.subdivisions.rend(); ++it) {
      auto& l1 = nr.at(it->w1);
      auto q1 = std::find(l1.begin(), l1.end(), it->w3);
      if (q1 == l1.end()) throw InternalCheckError("subdivision chord missing");
      l1.erase(q1);
      auto& l3 = nr.at(it->w3);
      auto q3 = std::find(l3.begin(), l3.end(), it->w1);
      if (q3 == l3.end()) throw InternalCheckError("subdivision chord missing");
      l3.erase(q3);
      contract_into(nr, it->u, it->w1);
      contract_into(nr, it->u, it->w2);
      contract_into(nr, it->u, it->w3);
    }
    RotationSystem orot;
    for (const auto& [nm, lst] : nr) {
      VertexId v = inst.id_of(nm);
      std::vector<Edge>& o = orot[v];
      for (const std::string& nb : lst) o.push_back(Edge(v, inst.id_of(nb)));
    }
    long budget = 200000;
    if (!reinsert_removed(inst, orot, removed_edges, 0, budget)) continue;

    out.verdict.feasible = true;
    out.rotation = std::move(orot);
    return out;
  }
  throw InternalCheckError("no orientation of the decomposition yields a verified embedding");
}

}  // namespace orthosefe
