#include "orthosefe/drawing.hpp"

#include <algorithm>
#include <deque>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace orthosefe {

namespace {

// Union edge list with owning graph (-1 for shared edges).
std::vector<std::pair<Edge, int>> union_edges(const Instance& inst) {
  std::vector<std::pair<Edge, int>> out;
  for (const Edge& e : inst.shared) out.push_back({e, -1});
  for (int g = 0; g < inst.k; ++g)
    for (const Edge& e : inst.exclusive[g]) out.push_back({e, g});
  return out;
}

void add_point(std::vector<GridPoint>& p, GridPoint q) {
  if (!p.empty() && p.back() == q) return;
  if (p.size() >= 2) {
    const GridPoint& a = p[p.size() - 2];
    const GridPoint& b = p.back();
    if ((a.first == b.first && b.first == q.first) ||
        (a.second == b.second && b.second == q.second)) {
      p.back() = q;
      return;
    }
  }
  p.push_back(q);
}

// Columns kept in a stable left-to-right order; inserting next to an
// existing column preserves every relative order established so far.
struct Cols {
  std::list<int> seq;
  std::map<int, std::list<int>::iterator> at;
  int n = 0;

  int front() {
    seq.push_front(n);
    at[n] = seq.begin();
    return n++;
  }
  int back() {
    seq.push_back(n);
    at[n] = std::prev(seq.end());
    return n++;
  }
  int before(int ref) {
    auto it = seq.insert(at.at(ref), n);
    at[n] = it;
    return n++;
  }
  int after(int ref) {
    auto it = at.at(ref);
    ++it;
    it = seq.insert(it, n);
    at[n] = it;
    return n++;
  }
};

struct EdgePlan {
  int col = -1;
  char lo = '?';
  char hi = '?';
};

// One placement attempt for a fixed base edge direction. Vertices go on
// increasing rows three units apart; every edge runs vertically in its own
// column and attaches to its endpoints inside their three-row bands. Edges
// sharing a port share the port's column; only same-graph overlaps matter,
// and the final validation pass arbitrates.
std::optional<OrthogonalDrawing> attempt_draw(const Instance& inst,
                                              const RotationSystem& rot,
                                              VertexId s, VertexId t) {
  StOrdering st = st_order(inst, s, t);
  const int n = inst.vertex_count();
  const Edge root(s, t);

  Cols cols;
  const int root_col = cols.back();  // stays the leftmost column
  std::map<Edge, EdgePlan> plan;
  plan[root] = EdgePlan{root_col, 'S', 'W'};
  std::vector<int> vcol(n, -1);
  std::map<int, std::vector<Edge>> col_users;
  col_users[root_col].push_back(root);

  auto lower_of = [&](const Edge& e) {
    return st.pos[e.u] < st.pos[e.v] ? e.u : e.v;
  };
  auto upper_of = [&](const Edge& e) {
    return st.pos[e.u] < st.pos[e.v] ? e.v : e.u;
  };

  static const char kCcw[4] = {'S', 'E', 'N', 'W'};

  for (int idx = 0; idx < n; ++idx) {
    VertexId v = st.order[idx];
    auto rit = rot.find(v);
    if (rit == rot.end() || rit->second.empty()) return std::nullopt;
    std::vector<Edge> rv = rit->second;

    // Start the walk at a shared edge so groups never straddle the seam.
    {
      size_t s0 = rv.size();
      for (size_t i = 0; i < rv.size(); ++i)
        if (inst.has_shared_edge(rv[i])) {
          s0 = i;
          break;
        }
      if (s0 == rv.size()) return std::nullopt;
      std::rotate(rv.begin(), rv.begin() + s0, rv.end());
    }

    // Port groups: shared edges stand alone; the exclusive edges between two
    // shared edges are paired across graphs, preserving each graph's order.
    std::vector<std::vector<Edge>> groups;
    size_t i = 0;
    while (i < rv.size()) {
      if (inst.has_shared_edge(rv[i])) {
        groups.push_back({rv[i]});
        ++i;
        continue;
      }
      std::vector<std::vector<Edge>> per(inst.k);
      size_t j = i;
      while (j < rv.size() && !inst.has_shared_edge(rv[j])) {
        int g = graph_of(inst, rv[j]);
        if (g < 0) return std::nullopt;
        per[g].push_back(rv[j]);
        ++j;
      }
      size_t depth = 0;
      for (const auto& lst : per) depth = std::max(depth, lst.size());
      for (size_t d = 0; d < depth; ++d) {
        std::vector<Edge> grp;
        for (const auto& lst : per)
          if (d < lst.size()) grp.push_back(lst[d]);
        groups.push_back(grp);
      }
      i = j;
    }
    const int G = static_cast<int>(groups.size());
    if (G > 4) return std::nullopt;

    auto is_in = [&](const Edge& e) { return st.pos[upper_of(e)] == idx; };
    auto has_in = [&](const std::vector<Edge>& grp) {
      for (const Edge& e : grp)
        if (is_in(e)) return true;
      return false;
    };
    auto has_out = [&](const std::vector<Edge>& grp) {
      for (const Edge& e : grp)
        if (!is_in(e)) return true;
      return false;
    };

    // Compass assignment: groups[(o+q)%G] -> kCcw[(base+q)%4]. The base
    // edge anchors the first and last vertex; elsewhere the south port must
    // carry only entering edges (the vertex sits on one of their columns).
    int o = -1;
    int base = 0;
    if (v == s || v == t) {
      for (int q = 0; q < G; ++q)
        for (const Edge& e : groups[q])
          if (e == root) o = q;
      if (o < 0) return std::nullopt;
      base = (v == s) ? 0 : 3;
    } else {
      int best = 1 << 20;
      for (int cand = 0; cand < G; ++cand) {
        if (!has_in(groups[cand]) || has_out(groups[cand])) continue;
        int score = 0;
        if (G >= 3 && has_in(groups[(cand + 2) % G])) score += 1;
        if (score < best) {
          best = score;
          o = cand;
        }
      }
      if (o < 0) return std::nullopt;
    }
    std::vector<char> port_of(G);
    for (int q = 0; q < G; ++q) port_of[(o + q) % G] = kCcw[(base + q) % 4];

    // Vertex column: the first vertex gets a fresh column; every other
    // vertex sits on the column of one entering south-port edge whose
    // column carries no edge continuing past this row.
    if (v == s) {
      vcol[v] = cols.back();
    } else {
      int sg = -1;
      for (int q = 0; q < G; ++q)
        if (port_of[q] == 'S') sg = q;
      if (sg < 0) return std::nullopt;
      std::vector<Edge> cand;
      for (const Edge& e : groups[sg])
        if (is_in(e) && e != root) cand.push_back(e);
      if (cand.empty()) return std::nullopt;
      std::sort(cand.begin(), cand.end(), [&](const Edge& a, const Edge& b) {
        bool sa = inst.has_shared_edge(a), sb = inst.has_shared_edge(b);
        if (sa != sb) return sa;
        return a < b;
      });
      int chosen = -1;
      for (const Edge& e : cand) {
        if (plan[e].col < 0) return std::nullopt;
        bool busy = false;
        for (const Edge& other : col_users[plan[e].col])
          if (!(other == e) && st.pos[upper_of(other)] > idx) busy = true;
        if (!busy) {
          chosen = plan[e].col;
          break;
        }
      }
      vcol[v] = (chosen >= 0) ? chosen : cols.after(plan[cand.front()].col);
    }

    // Record ports; leaving edges get their column now (one per port).
    int col_w = -1, col_e = -1;
    for (int q = 0; q < G; ++q) {
      char p = port_of[q];
      for (const Edge& e : groups[q]) {
        if (e == root) continue;
        if (is_in(e)) {
          plan[e].hi = p;
        } else {
          int c;
          if (p == 'N') {
            c = vcol[v];
          } else if (p == 'W') {
            if (col_w < 0) col_w = cols.before(vcol[v]);
            c = col_w;
          } else if (p == 'E') {
            if (col_e < 0) col_e = cols.after(vcol[v]);
            c = col_e;
          } else {
            return std::nullopt;  // a leaving edge cannot use the south port
          }
          plan[e].col = c;
          plan[e].lo = p;
          col_users[c].push_back(e);
        }
      }
    }
  }

  // Final x order.
  std::vector<int> xof(cols.n, 0);
  {
    int xi = 0;
    for (int c : cols.seq) xof[c] = xi++;
  }
  auto row = [&](VertexId v) { return 1 + 3 * st.pos[v]; };

  OrthogonalDrawing d;
  d.root = root;
  for (int v = 0; v < n; ++v) {
    if (vcol[v] < 0) return std::nullopt;
    d.pos[v] = {xof[vcol[v]], row(v)};
  }

  for (const auto& [e, g] : union_edges(inst)) {
    auto pit = plan.find(e);
    if (pit == plan.end()) return std::nullopt;
    const EdgePlan& ep = pit->second;
    if (ep.col < 0 || ep.lo == '?' || ep.hi == '?') return std::nullopt;
    std::vector<GridPoint> p;
    if (e == root) {
      int x1 = d.pos[s].first, y1 = d.pos[s].second;
      int xn = d.pos[t].first, yn = d.pos[t].second;
      int xr = xof[root_col];
      add_point(p, {x1, y1});
      add_point(p, {x1, y1 - 1});
      add_point(p, {xr, y1 - 1});
      add_point(p, {xr, yn});
      add_point(p, {xn, yn});
    } else {
      VertexId u = lower_of(e), w = upper_of(e);
      int xu = d.pos[u].first, yu = d.pos[u].second;
      int xw = d.pos[w].first, yw = d.pos[w].second;
      int xc = xof[ep.col];
      add_point(p, {xu, yu});
      if (ep.lo == 'W' || ep.lo == 'E') {
        add_point(p, {xc, yu});
      } else if (ep.lo == 'N') {
        if (xc != xu) return std::nullopt;
      } else {
        return std::nullopt;
      }
      if (ep.hi == 'S' || xc == xw) {
        if (xc == xw) {
          add_point(p, {xc, yw});
        } else {
          add_point(p, {xc, yw - 1});
          add_point(p, {xw, yw - 1});
          add_point(p, {xw, yw});
        }
      } else if (ep.hi == 'W' || ep.hi == 'E') {
        add_point(p, {xc, yw});
        add_point(p, {xw, yw});
      } else if (ep.hi == 'N') {
        add_point(p, {xc, yw + 1});
        add_point(p, {xw, yw + 1});
        add_point(p, {xw, yw});
      } else {
        return std::nullopt;
      }
    }
    if (p.size() < 2) return std::nullopt;
    d.paths[e] = p;
  }

  for (const auto& [e, ep] : plan) {
    d.ports.port[lower_of(e)][e] = ep.lo;
    d.ports.port[upper_of(e)][e] = ep.hi;
  }

  // Grid bound: columns are at most one per edge plus one per vertex.
  int span = 24 * n;
  for (const auto& [v, pt] : d.pos)
    if (pt.first > span || pt.second > span)
      throw InternalCheckError("drawing grid exceeded its documented bound");
  return d;
}

}  // namespace

int bend_count(const std::vector<GridPoint>& path) {
  int b = 0;
  for (size_t i = 2; i < path.size(); ++i) {
    bool h1 = path[i - 1].second == path[i - 2].second;
    bool h2 = path[i].second == path[i - 1].second;
    if (h1 != h2) ++b;
  }
  return b;
}

StOrdering st_order(const Instance& inst, VertexId s, VertexId t) {
  if (s < 0 || t < 0 || s >= inst.vertex_count() || t >= inst.vertex_count() ||
      !inst.has_shared_edge(Edge(s, t)))
    throw InstanceError("the base edge must be a shared edge");
  if (!shared_graph_biconnected(inst))
    throw InstanceError("the drawing requires a biconnected shared graph");

  const int n = inst.vertex_count();
  std::vector<std::vector<VertexId>> adj(n);
  for (const Edge& e : inst.shared) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<VertexId> ord = {s, t};
  std::vector<char> placed(n, 0);
  placed[s] = placed[t] = 1;

  // Grow the order one ear at a time: find a path of new vertices between
  // two distinct placed vertices and insert it directly after the earlier
  // one, so every interior vertex keeps a lower and a higher neighbour.
  while (static_cast<int>(ord.size()) < n) {
    VertexId a = -1, b = -1;
    for (VertexId x : ord) {
      for (VertexId y : adj[x])
        if (!placed[y]) {
          a = x;
          b = y;
          break;
        }
      if (a >= 0) break;
    }
    if (a < 0)
      throw InstanceError("the drawing requires a biconnected shared graph");

    std::vector<int> par(n, -2);
    par[b] = -1;
    std::deque<VertexId> q = {b};
    VertexId hit = -1, hit_from = -1;
    while (!q.empty() && hit < 0) {
      VertexId x = q.front();
      q.pop_front();
      for (VertexId y : adj[x]) {
        if (placed[y]) {
          if (y != a) {
            hit = y;
            hit_from = x;
            break;
          }
          continue;
        }
        if (par[y] == -2) {
          par[y] = x;
          q.push_back(y);
        }
      }
    }
    if (hit < 0)
      throw InstanceError("the drawing requires a biconnected shared graph");

    std::vector<VertexId> path;
    for (VertexId x = hit_from; x != -1; x = par[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());  // runs a -> ... -> hit

    auto ixa = std::find(ord.begin(), ord.end(), a) - ord.begin();
    auto ixc = std::find(ord.begin(), ord.end(), hit) - ord.begin();
    if (ixa > ixc) {
      std::reverse(path.begin(), path.end());
      ixa = ixc;
    }
    ord.insert(ord.begin() + ixa + 1, path.begin(), path.end());
    for (VertexId x : path) placed[x] = 1;
  }

  StOrdering st;
  st.order = ord;
  st.pos.assign(n, -1);
  for (int i = 0; i < n; ++i) st.pos[ord[i]] = i;
  return st;
}

OrthogonalDrawing draw(const Instance& inst, const RotationSystem& rot) {
  if (!shared_graph_biconnected(inst))
    throw InstanceError("the drawing requires a biconnected shared graph");
  Verdict pre = check_sefe_orthogonality(inst, rot);
  if (!pre.feasible)
    throw InstanceError(
        "the rotation system is not a valid simultaneous embedding");

  RotationSystem mirrored;
  for (const auto& [v, lst] : rot) {
    std::vector<Edge> r(lst.rbegin(), lst.rend());
    mirrored[v] = r;
  }

  const RotationSystem* candidates[] = {&rot, &mirrored};
  for (const RotationSystem* rs : candidates) {
    for (const Edge& e : inst.shared) {
      for (auto [s, t] : {std::pair<VertexId, VertexId>{e.u, e.v},
                          std::pair<VertexId, VertexId>{e.v, e.u}}) {
        std::optional<OrthogonalDrawing> att;
        try {
          att = attempt_draw(inst, *rs, s, t);
        } catch (const InstanceError&) {
          continue;
        }
        if (att && validate_drawing(inst, *att).feasible) return *att;
      }
    }
  }
  throw InternalCheckError("no base edge produced a drawing that validates");
}

Verdict validate_drawing(const Instance& inst, const OrthogonalDrawing& d) {
  Verdict out;
  auto bad = [&](const std::string& msg) {
    out.violations.push_back({"drawing", msg});
  };

  std::map<GridPoint, VertexId> vertex_at;
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    auto it = d.pos.find(v);
    if (it == d.pos.end()) {
      bad("vertex \"" + inst.name_of(v) + "\" has no position");
      continue;
    }
    auto ins = vertex_at.emplace(it->second, v);
    if (!ins.second)
      bad("vertices \"" + inst.name_of(ins.first->second) + "\" and \"" +
          inst.name_of(v) + "\" share a grid point");
  }

  auto edges = union_edges(inst);
  std::set<Edge> known;
  for (const auto& [e, g] : edges) known.insert(e);
  for (const auto& [e, p] : d.paths)
    if (!known.count(e)) bad("path for unknown edge " + edge_name(inst, e));

  std::map<Edge, std::vector<GridPoint>> raster;
  for (const auto& [e, g] : edges) {
    auto it = d.paths.find(e);
    if (it == d.paths.end()) {
      bad("edge " + edge_name(inst, e) + " has no path");
      continue;
    }
    const auto& p = it->second;
    if (p.size() < 2) {
      bad("edge " + edge_name(inst, e) + " has a degenerate path");
      continue;
    }
    if (!d.pos.count(e.u) || !d.pos.count(e.v)) continue;
    GridPoint pu = d.pos.at(e.u), pv = d.pos.at(e.v);
    if (!((p.front() == pu && p.back() == pv) ||
          (p.front() == pv && p.back() == pu)))
      bad("edge " + edge_name(inst, e) + " does not join its endpoints");

    bool rect = true;
    std::vector<GridPoint> pts;
    for (size_t i = 0; i + 1 < p.size() && rect; ++i) {
      int dx = p[i + 1].first - p[i].first;
      int dy = p[i + 1].second - p[i].second;
      if ((dx == 0) == (dy == 0)) {
        rect = false;
        break;
      }
      int sx = (dx > 0) - (dx < 0), sy = (dy > 0) - (dy < 0);
      GridPoint cur = p[i];
      while (cur != p[i + 1]) {
        pts.push_back(cur);
        cur.first += sx;
        cur.second += sy;
      }
    }
    if (!rect) {
      bad("edge " + edge_name(inst, e) + " is not rectilinear");
      continue;
    }
    pts.push_back(p.back());

    std::sort(pts.begin(), pts.end());
    bool overlap = false;
    for (size_t i = 1; i < pts.size(); ++i)
      if (pts[i] == pts[i - 1]) overlap = true;
    if (overlap) bad("edge " + edge_name(inst, e) + " overlaps itself");
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    if (bend_count(p) > 3)
      bad("edge " + edge_name(inst, e) + " bends more than three times");

    for (const auto& [pt, v] : vertex_at)
      if (v != e.u && v != e.v &&
          std::binary_search(pts.begin(), pts.end(), pt))
        bad("edge " + edge_name(inst, e) + " passes through vertex \"" +
            inst.name_of(v) + "\"");
    raster[e] = pts;
  }

  for (int g = 0; g < inst.k; ++g) {
    std::vector<Edge> eg = inst.shared;
    eg.insert(eg.end(), inst.exclusive[g].begin(), inst.exclusive[g].end());
    for (size_t a = 0; a < eg.size(); ++a) {
      auto ra = raster.find(eg[a]);
      if (ra == raster.end()) continue;
      for (size_t b = a + 1; b < eg.size(); ++b) {
        auto rb = raster.find(eg[b]);
        if (rb == raster.end()) continue;
        std::vector<GridPoint> allowed;
        for (VertexId x : {eg[a].u, eg[a].v})
          if ((x == eg[b].u || x == eg[b].v) && d.pos.count(x))
            allowed.push_back(d.pos.at(x));
        std::vector<GridPoint> common;
        std::set_intersection(ra->second.begin(), ra->second.end(),
                              rb->second.begin(), rb->second.end(),
                              std::back_inserter(common));
        for (const GridPoint& pt : common) {
          if (std::find(allowed.begin(), allowed.end(), pt) == allowed.end()) {
            bad("edges " + edge_name(inst, eg[a]) + " and " +
                edge_name(inst, eg[b]) + " cross in graph " +
                std::to_string(g));
            break;
          }
        }
      }
    }
  }

  out.feasible = out.violations.empty();
  return out;
}

std::string export_svg(const Instance& inst, const OrthogonalDrawing& d,
                       const SvgStyle& style) {
  int minx = 0, maxx = 1, miny = 0, maxy = 1;
  bool first = true;
  auto grow = [&](const GridPoint& p) {
    if (first) {
      minx = maxx = p.first;
      miny = maxy = p.second;
      first = false;
      return;
    }
    minx = std::min(minx, p.first);
    maxx = std::max(maxx, p.first);
    miny = std::min(miny, p.second);
    maxy = std::max(maxy, p.second);
  };
  for (const auto& [v, p] : d.pos) grow(p);
  for (const auto& [e, path] : d.paths)
    for (const auto& p : path) grow(p);

  auto px = [&](const GridPoint& p) {
    return style.margin + (p.first - minx) * style.scale;
  };
  auto py = [&](const GridPoint& p) {
    return style.margin + (maxy - p.second) * style.scale;
  };
  int width = 2 * style.margin + (maxx - minx) * style.scale;
  int height = 2 * style.margin + (maxy - miny) * style.scale;

  std::ostringstream ss;
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
     << height << "\">\n";
  ss << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"#ffffff\"/>\n";

  auto emit = [&](const Edge& e, const std::string& color, int w) {
    auto it = d.paths.find(e);
    if (it == d.paths.end()) return;
    ss << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
       << w << "\" points=\"";
    bool sep = false;
    for (const auto& p : it->second) {
      if (sep) ss << " ";
      ss << px(p) << "," << py(p);
      sep = true;
    }
    ss << "\"/>\n";
  };
  for (const Edge& e : inst.shared) emit(e, "#111111", 3);
  for (int g = 0; g < inst.k; ++g) {
    const std::string& c = style.colors[g % style.colors.size()];
    for (const Edge& e : inst.exclusive[g]) emit(e, c, 2);
  }
  for (const auto& [v, p] : d.pos) {
    ss << "<circle cx=\"" << px(p) << "\" cy=\"" << py(p)
       << "\" r=\"4\" fill=\"#ffffff\" stroke=\"#111111\" stroke-width=\"2\"/>\n";
    ss << "<text x=\"" << (px(p) + 6) << "\" y=\"" << (py(p) - 6)
       << "\" font-family=\"monospace\" font-size=\"12\">" << inst.name_of(v)
       << "</text>\n";
  }
  ss << "</svg>\n";
  return ss.str();
}

}  // namespace orthosefe
