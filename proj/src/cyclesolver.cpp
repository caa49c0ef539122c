#include "orthosefe/cyclesolver.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <set>

#include "json.hpp"

namespace orthosefe {

namespace {

NamePair np(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

NamePair np_of(const Instance& in, Edge e) { return np(in.names[e.u], in.names[e.v]); }

std::vector<std::vector<NamePair>> exclusive_names(const Instance& in) {
  std::vector<std::vector<NamePair>> out(in.k);
  for (int g = 0; g < in.k; ++g)
    for (const Edge& e : in.exclusive[g]) out[g].push_back(np_of(in, e));
  return out;
}

struct NameGen {
  std::set<std::string> used;
  explicit NameGen(const Instance& in) : used(in.names.begin(), in.names.end()) {}
  std::string operator()(std::string base) {
    while (used.count(base)) base += "'";
    used.insert(base);
    return base;
  }
};

// (a, b, c) appear in this order walking the cycle forward from a.
bool cyclic3(const Instance& in, VertexId a, VertexId b, VertexId c) {
  const int n = static_cast<int>(in.cycle->size());
  const int ab = (in.cycle_pos[b] - in.cycle_pos[a] + n) % n;
  const int ac = (in.cycle_pos[c] - in.cycle_pos[a] + n) % n;
  return ab < ac;
}

void require_pure_cycle(const Instance& in, const char* who) {
  if (in.k != 2) throw InstanceError(std::string(who) + " requires exactly two graphs");
  if (!in.cycle) throw InstanceError(std::string(who) + " requires a cycle instance");
  if (!in.isolated.empty())
    throw InstanceError(std::string(who) + " requires every vertex on the cycle");
}

// Identity carry for every exclusive edge; steps then overwrite the edges
// they touch.
std::map<NamePair, NamePair> identity_carry(const Instance& in) {
  std::map<NamePair, NamePair> carry;
  for (int g = 0; g < in.k; ++g)
    for (const Edge& e : in.exclusive[g]) {
      NamePair key = np_of(in, e);
      carry[key] = key;
    }
  return carry;
}

}  // namespace

std::optional<Transformed> reduce_degree_step(const Instance& in) {
  require_pure_cycle(in, "degree reduction");
  VertexId v = -1;
  for (VertexId x = 0; x < in.vertex_count() && v < 0; ++x)
    if (exclusive_degree(in, x, 0) == 2) v = x;
  if (v < 0) return std::nullopt;
  if (exclusive_degree(in, v, 1) >= 2)
    throw InstanceError("cannot reduce degree at \"" + in.names[v] +
                        "\": the vertex carries two exclusive edges of each graph");

  std::vector<Edge> e1at, e2at;
  for (const Edge& e : in.exclusive[0])
    if (e.touches(v)) e1at.push_back(e);
  for (const Edge& e : in.exclusive[1])
    if (e.touches(v)) e2at.push_back(e);
  VertexId ue = e1at[0].other(v), uf = e1at[1].other(v);
  if (!cyclic3(in, ue, v, uf)) std::swap(ue, uf);
  const bool has_h = !e2at.empty();
  const VertexId uh = has_h ? e2at[0].other(v) : -1;

  NameGen fresh(in);
  const std::string& vn = in.names[v];
  const std::string x1 = fresh(vn + ".x1"), x2 = fresh(vn + ".x2"), ve = fresh(vn + ".e"),
                    x3 = fresh(vn + ".x3"), y1 = fresh(vn + ".y1"), y2 = fresh(vn + ".y2"),
                    vf = fresh(vn + ".f"), y3 = fresh(vn + ".y3"), vp = fresh(vn + ".p");
  std::string z1, z2, vh, z3;
  if (has_h) {
    z1 = fresh(vn + ".z1");
    z2 = fresh(vn + ".z2");
    vh = fresh(vn + ".h");
    z3 = fresh(vn + ".z3");
  }

  // Replace v by the path, first gadget vertex toward v's cycle predecessor
  // (the u_e side under the (u_e, v, u_f) cyclic labeling).
  std::vector<std::string> cyc;
  for (VertexId w : *in.cycle) {
    if (w != v) {
      cyc.push_back(in.names[w]);
      continue;
    }
    for (const std::string* s : {&x1, &x2, &ve, &x3, &y1, &y2, &vf, &y3, &vp}) cyc.push_back(*s);
    if (has_h)
      for (const std::string* s : {&z1, &z2, &vh, &z3}) cyc.push_back(*s);
  }

  auto ex = exclusive_names(in);
  const std::string uen = in.names[ue], ufn = in.names[uf];
  std::erase(ex[0], np(vn, uen));
  std::erase(ex[0], np(vn, ufn));
  ex[0].push_back(np(ve, uen));
  ex[0].push_back(np(vf, ufn));
  ex[1].push_back(np(x1, ve));
  ex[1].push_back(np(x2, x3));
  ex[1].push_back(np(y1, vf));
  ex[1].push_back(np(y2, y3));
  ex[1].push_back(np(ve, vp));
  ex[1].push_back(np(vf, vp));
  if (has_h) {
    const std::string uhn = in.names[uh];
    std::erase(ex[1], np(vn, uhn));
    ex[0].push_back(np(vh, vp));
    ex[1].push_back(np(z1, vh));
    ex[1].push_back(np(z2, z3));
    ex[1].push_back(np(vh, uhn));
  }

  TransformStep step;
  step.rule = "reduce-degree";
  step.roles = {{"v", vn},   {"u_e", uen}, {"u_f", ufn}, {"v_e", ve},
                {"v_f", vf}, {"v'", vp}};
  step.carry = identity_carry(in);
  step.carry[np(vn, uen)] = np(ve, uen);
  step.carry[np(vn, ufn)] = np(vf, ufn);
  if (has_h) {
    const std::string uhn = in.names[uh];
    step.roles["u_h"] = uhn;
    step.roles["v_h"] = vh;
    step.carry[np(vn, uhn)] = np(vh, uhn);
  }
  return Transformed{make_cycle_instance(cyc, ex), std::move(step)};
}

std::optional<Transformed> outerplanarize_step(const Instance& in) {
  require_pure_cycle(in, "outerplanarization");
  for (VertexId x = 0; x < in.vertex_count(); ++x)
    if (exclusive_degree(in, x, 0) > 1)
      throw InstanceError("outerplanarization requires graph 0 of maximum degree three");

  const auto& E1 = in.exclusive[0];
  const int n = static_cast<int>(in.cycle->size());
  auto pos = [&](VertexId x) { return in.cycle_pos[x]; };

  bool found = false;
  int best_len = INT_MAX;
  std::array<VertexId, 4> best{};  // u, w, v, z in cyclic order, e = (u,v), f = (w,z)
  for (size_t i = 0; i < E1.size(); ++i)
    for (size_t j = i + 1; j < E1.size(); ++j) {
      if (!alternate(in, E1[i], E1[j])) continue;
      found = true;
      std::array<VertexId, 4> q{E1[i].u, E1[i].v, E1[j].u, E1[j].v};
      std::sort(q.begin(), q.end(), [&](VertexId a, VertexId b) { return pos(a) < pos(b); });
      for (int r = 0; r < 4; ++r) {
        std::array<VertexId, 4> tup{q[r], q[(r + 1) % 4], q[(r + 2) % 4], q[(r + 3) % 4]};
        const int len = (pos(tup[3]) - pos(tup[0]) + n) % n;
        if (len < best_len || (len == best_len && tup < best)) {
          best_len = len;
          best = tup;
        }
      }
    }
  if (!found) return std::nullopt;
  const VertexId u = best[0], w = best[1], v = best[2], z = best[3];

  // Interior of the forward path u -> w -> v -> z, split at w and v.
  std::vector<std::string> H1, H2, H3;
  {
    int seg = 0;
    for (int t = 1;; ++t) {
      const VertexId x = (*in.cycle)[(pos(u) + t) % n];
      if (x == z) break;
      if (x == w) {
        seg = 1;
        continue;
      }
      if (x == v) {
        seg = 2;
        continue;
      }
      (seg == 0 ? H1 : seg == 1 ? H2 : H3).push_back(in.names[x]);
    }
  }

  NameGen fresh(in);
  const std::string un = in.names[u], wn = in.names[w], vn = in.names[v], zn = in.names[z];
  const std::string up = fresh(un + "'"), wp = fresh(wn + "'"), vp = fresh(vn + "'"),
                    zp = fresh(zn + "'");
  // The new pair (w', z') must stay a chord: when w and v are neighbors on
  // the cycle the spliced segment between w' and z' is empty, so subdivide it
  // with a plain degree-2 vertex (no chord endpoint lies in between, hence no
  // alternation or port constraint changes).
  if (H2.empty()) H2.push_back(fresh(un + ".s"));
  std::array<std::string, 12> X;
  for (int t = 1; t <= 11; ++t) X[t] = fresh(un + ".q" + std::to_string(t));

  std::vector<std::string> cyc;
  cyc.push_back(un);
  for (auto& s : H1) cyc.push_back(s);
  cyc.push_back(wp);
  for (auto& s : H2) cyc.push_back(s);
  cyc.push_back(zp);
  cyc.push_back(X[1]);
  cyc.push_back(X[2]);
  cyc.push_back(X[3]);
  cyc.push_back(vn);
  for (int t = 4; t <= 7; ++t) cyc.push_back(X[t]);
  cyc.push_back(wn);
  for (int t = 8; t <= 10; ++t) cyc.push_back(X[t]);
  cyc.push_back(up);
  cyc.push_back(X[11]);
  cyc.push_back(vp);
  for (auto& s : H3) cyc.push_back(s);
  cyc.push_back(zn);
  for (int t = 1;; ++t) {
    const VertexId x = (*in.cycle)[(pos(z) + t) % n];
    if (x == u) break;
    cyc.push_back(in.names[x]);
  }

  auto ex = exclusive_names(in);
  TransformStep step;
  step.rule = "outerplanarize";
  step.roles = {{"u", un}, {"w", wn}, {"v", vn},  {"z", zn},
                {"u'", up}, {"w'", wp}, {"v'", vp}, {"z'", zp}};
  step.carry = identity_carry(in);
  // Re-home graph-1 edges at w and v to w' and v'.
  for (auto& pr : ex[1]) {
    const NamePair old = pr;
    if (pr.first == wn) pr.first = wp;
    if (pr.second == wn) pr.second = wp;
    if (pr.first == vn) pr.first = vp;
    if (pr.second == vn) pr.second = vp;
    if (pr != old) {
      pr = np(pr.first, pr.second);
      step.carry[old] = pr;
    }
  }
  ex[0].push_back(np(up, vp));
  ex[0].push_back(np(wp, zp));
  for (const NamePair& pr :
       {np(zp, X[2]), np(zp, X[3]), np(X[1], vn), np(X[3], X[4]), np(vn, X[6]), np(X[5], wn),
        np(X[7], X[8]), np(wn, X[10]), np(X[8], up), np(X[9], up)})
    ex[1].push_back(pr);

  return Transformed{make_cycle_instance(cyc, ex), std::move(step)};
}

std::optional<Transformed> split_offending_step(const Instance& in) {
  require_pure_cycle(in, "offending-vertex splitting");
  auto deg4 = [&](VertexId x) { return x >= 0 && exclusive_degree(in, x, 0) == 2; };
  const int n = static_cast<int>(in.cycle->size());
  VertexId v = -1;
  for (VertexId x = 0; x < in.vertex_count() && v < 0; ++x) {
    if (!deg4(x)) continue;
    const int p = in.cycle_pos[x];
    if (deg4((*in.cycle)[(p + 1) % n]) || deg4((*in.cycle)[(p + n - 1) % n])) {
      v = x;
      continue;
    }
    for (const Edge& e : in.exclusive[0])
      if (e.touches(x) && deg4(e.other(x))) {
        v = x;
        break;
      }
  }
  if (v < 0) return std::nullopt;

  std::vector<Edge> e1at;
  for (const Edge& e : in.exclusive[0])
    if (e.touches(v)) e1at.push_back(e);
  VertexId u = e1at[0].other(v), w = e1at[1].other(v);
  if (!cyclic3(in, u, v, w)) std::swap(u, w);

  NameGen fresh(in);
  const std::string vn = in.names[v], un = in.names[u], wn = in.names[w];
  const std::string va = fresh(vn + ".a"), vb = fresh(vn + ".b"), up = fresh(un + "'"),
                    wp = fresh(wn + "'");
  std::array<std::string, 11> X, Y;
  for (int t = 1; t <= 10; ++t) {
    X[t] = fresh(vn + ".x" + std::to_string(t));
    Y[t] = fresh(vn + ".y" + std::to_string(t));
  }

  std::vector<std::string> cyc;
  for (VertexId x : *in.cycle) {
    if (x != v) {
      cyc.push_back(in.names[x]);
      continue;
    }
    cyc.push_back(X[1]);
    cyc.push_back(X[2]);
    cyc.push_back(va);
    for (int t = 3; t <= 8; ++t) cyc.push_back(X[t]);
    cyc.push_back(up);
    cyc.push_back(X[9]);
    cyc.push_back(X[10]);
    cyc.push_back(vn);
    cyc.push_back(Y[1]);
    cyc.push_back(Y[2]);
    cyc.push_back(wp);
    for (int t = 3; t <= 8; ++t) cyc.push_back(Y[t]);
    cyc.push_back(vb);
    cyc.push_back(Y[9]);
    cyc.push_back(Y[10]);
  }

  auto ex = exclusive_names(in);
  std::erase(ex[0], np(vn, un));
  std::erase(ex[0], np(vn, wn));
  ex[0].push_back(np(un, va));
  ex[0].push_back(np(up, vn));
  ex[0].push_back(np(vn, wp));
  ex[0].push_back(np(vb, wn));
  for (const NamePair& pr :
       {np(X[1], va), np(X[2], X[3]), np(va, X[5]), np(X[4], X[7]), np(X[6], up), np(X[8], X[9]),
        np(up, X[10]), np(Y[1], wp), np(Y[2], Y[3]), np(wp, Y[5]), np(Y[4], Y[7]), np(Y[6], vb),
        np(Y[8], Y[9]), np(vb, Y[10])})
    ex[1].push_back(pr);

  TransformStep step;
  step.rule = "split-offending";
  step.roles = {{"v", vn},   {"u", un},   {"w", wn},  {"v_a", va},
                {"v_b", vb}, {"u'", up}, {"w'", wp}};
  step.carry = identity_carry(in);
  step.carry[np(vn, un)] = np(un, va);
  step.carry[np(vn, wn)] = np(vb, wn);
  return Transformed{make_cycle_instance(cyc, ex), std::move(step)};
}

SideAssignment pull_back(const Instance& prev, const TransformStep& step, const Instance& next,
                         const SideAssignment& a) {
  SideAssignment out;
  for (int g = 0; g < prev.k; ++g)
    for (const Edge& e : prev.exclusive[g]) {
      auto it = step.carry.find(np_of(prev, e));
      if (it == step.carry.end()) throw InternalCheckError("transform carry map is not total");
      const Edge target(next.id_of(it->second.first), next.id_of(it->second.second));
      auto jt = a.find(target);
      if (jt == a.end()) throw InternalCheckError("carried edge missing from the assignment");
      out[e] = jt->second;
    }
  return out;
}

NaeReduction reduce_to_nae(const Instance& in) {
  require_pure_cycle(in, "the satisfiability reduction");
  for (VertexId x = 0; x < in.vertex_count(); ++x)
    if (exclusive_degree(in, x, 0) > 1)
      throw InstanceError("the satisfiability reduction requires graph 0 of maximum degree three");
  const auto& E1 = in.exclusive[0];
  const auto& E2 = in.exclusive[1];
  for (size_t i = 0; i < E1.size(); ++i)
    for (size_t j = i + 1; j < E1.size(); ++j)
      if (alternate(in, E1[i], E1[j]))
        throw InstanceError("the satisfiability reduction requires no alternating graph-0 pairs");

  NaeReduction red;
  const int m2 = static_cast<int>(E2.size());
  std::vector<std::vector<int>> adj(m2);
  for (int i = 0; i < m2; ++i)
    for (int j = i + 1; j < m2; ++j)
      if (alternate(in, E2[i], E2[j])) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  // Two-color each component; the part holding the smallest member edge is
  // the positive part. E2 is sorted, so scanning in index order discovers
  // components by smallest member and anchors them there.
  std::vector<int> color(m2, -1);
  std::map<Edge, int> lit;
  for (int i = 0; i < m2; ++i) {
    if (color[i] >= 0) continue;
    const int var = static_cast<int>(red.components.size()) + 1;
    red.components.emplace_back();
    color[i] = 0;
    std::vector<int> queue{i}, members{i};
    while (!queue.empty()) {
      const int cur = queue.back();
      queue.pop_back();
      for (int nb : adj[cur]) {
        if (color[nb] < 0) {
          color[nb] = color[cur] ^ 1;
          queue.push_back(nb);
          members.push_back(nb);
        } else if (color[nb] == color[cur]) {
          red.feasible_precheck = false;
          return red;
        }
      }
    }
    std::sort(members.begin(), members.end());
    for (int idx : members) {
      red.components.back().push_back({E2[idx], color[idx] == 0});
      lit[E2[idx]] = color[idx] == 0 ? var : -var;
    }
  }

  int vars = static_cast<int>(red.components.size());
  for (const Edge& e : E1)
    if (exclusive_degree(in, e.u, 1) == 2 && exclusive_degree(in, e.v, 1) == 2)
      red.helper_var[e] = ++vars;
  red.formula.num_vars = vars;

  auto lits_at = [&](VertexId x) {
    std::vector<int> ls;
    for (const Edge& e : E2)
      if (e.touches(x)) ls.push_back(lit.at(e));
    return ls;
  };
  for (const auto& [e, xv] : red.helper_var) {
    const auto lv = lits_at(e.u), lw = lits_at(e.v);
    red.formula.clauses.push_back({lv[0], lv[1], xv});
    red.formula.clauses.push_back({-xv, -lw[0], -lw[1]});
  }
  return red;
}

SideAssignment decode_nae(const Instance& in, const NaeReduction& red,
                          const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) < red.formula.num_vars)
    throw InstanceError("assignment shorter than the reduction's variable count");
  SideAssignment a;
  for (size_t c = 0; c < red.components.size(); ++c)
    for (const auto& [e, positive] : red.components[c]) {
      const bool val = positive ? assignment[c] : !assignment[c];
      a[e] = val ? Side::Left : Side::Right;
    }
  for (const Edge& e : in.exclusive[0]) {
    Side s = Side::Left;
    bool forced = false;
    for (VertexId x : {e.u, e.v}) {
      std::vector<Side> here;
      for (const Edge& e2 : in.exclusive[1])
        if (e2.touches(x)) here.push_back(a.at(e2));
      if (here.size() == 2 && here[0] == here[1]) {
        if (forced && s != here[0])
          throw InternalCheckError("endpoint triggers disagree for " + edge_name(in, e));
        s = here[0];
        forced = true;
      }
    }
    a[e] = s;
  }
  return a;
}

CycleSolution solve_cycle(const Instance& in) {
  if (in.k != 2) throw InstanceError("the cycle solver requires exactly two graphs");
  if (!in.cycle) throw InstanceError("the cycle solver requires a cycle instance");
  if (!in.isolated.empty())
    throw InstanceError("the cycle solver requires every vertex on the cycle");

  CycleSolution sol;
  sol.trace.states.push_back(in);
  const size_t step_cap = 4 * in.vertex_count() + 4 * in.exclusive_count() * in.exclusive_count() + 64;
  while (auto t = reduce_degree_step(sol.trace.states.back())) {
    sol.trace.steps.push_back(std::move(t->step));
    sol.trace.states.push_back(std::move(t->instance));
    if (sol.trace.steps.size() > step_cap)
      throw InternalCheckError("degree reduction did not terminate");
  }
  while (auto t = outerplanarize_step(sol.trace.states.back())) {
    sol.trace.steps.push_back(std::move(t->step));
    sol.trace.states.push_back(std::move(t->instance));
    if (sol.trace.steps.size() > step_cap)
      throw InternalCheckError("outerplanarization did not terminate");
  }

  const Instance& reduced = sol.trace.states.back();
  sol.reduction = reduce_to_nae(reduced);
  if (!sol.reduction.feasible_precheck) {
    sol.verdict.feasible = false;
    sol.verdict.violations.push_back(
        {"planarity", "alternation constraints among graph-1 exclusive edges are not two-colorable"});
    return sol;
  }
  sol.nae_assignment = nae_solve(sol.reduction.formula);
  if (!sol.nae_assignment) {
    sol.verdict.feasible = false;
    return sol;
  }

  SideAssignment a = decode_nae(reduced, sol.reduction, *sol.nae_assignment);
  if (!check_assignment(reduced, a).feasible)
    throw InternalCheckError("decoded assignment fails on the reduced instance");
  for (int i = static_cast<int>(sol.trace.steps.size()) - 1; i >= 0; --i)
    a = pull_back(sol.trace.states[i], sol.trace.steps[i], sol.trace.states[i + 1], a);
  Verdict final_check = check_assignment(in, a);
  if (!final_check.feasible)
    throw InternalCheckError("pulled-back witness fails on the original instance");
  sol.verdict = std::move(final_check);
  return sol;
}

std::string serialize_trace(const TransformationTrace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const TransformStep& s : trace.steps) {
    nlohmann::json carry = nlohmann::json::object();
    for (const auto& [from, to] : s.carry)
      carry[from.first + "-" + from.second] = to.first + "-" + to.second;
    steps.push_back({{"rule", s.rule}, {"roles", s.roles}, {"carry", carry}});
  }
  nlohmann::json doc;
  doc["steps"] = steps;
  return doc.dump(2) + "\n";
}

}  // namespace orthosefe
