#include "orthosefe/gadgets.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace orthosefe {

namespace {

NamePair np(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace

PositiveFormula parse_positive_3cnf(const std::string& text) {
  PositiveFormula f;
  std::map<std::string, int> index;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::istringstream words(line);
    std::vector<std::string> names;
    std::string w;
    while (words >> w) names.push_back(w);
    if (names.empty()) continue;
    if (names.size() != 3)
      throw InstanceError("line " + std::to_string(lineno) + ": a clause needs exactly three variables");
    std::array<int, 3> clause{};
    for (int t = 0; t < 3; ++t) {
      auto [it, fresh] = index.emplace(names[t], static_cast<int>(f.variables.size()));
      if (fresh) f.variables.push_back(names[t]);
      clause[t] = it->second;
    }
    if (clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2])
      throw InstanceError("line " + std::to_string(lineno) + ": a clause repeats a variable");
    f.clauses.push_back(clause);
  }
  if (f.clauses.empty()) throw InstanceError("the formula needs at least one clause");
  return f;
}

NaeFormula to_nae_formula(const PositiveFormula& f) {
  NaeFormula out;
  out.num_vars = static_cast<int>(f.variables.size());
  for (const auto& c : f.clauses) out.clauses.push_back({c[0] + 1, c[1] + 1, c[2] + 1});
  return out;
}

namespace {

std::string vb(int i, int j) { return "x" + std::to_string(i) + "c" + std::to_string(j); }
std::string cb(int j) { return "c" + std::to_string(j); }

}  // namespace

HardnessInstance generate_theorem3(const PositiveFormula& f) {
  const int n = static_cast<int>(f.variables.size());
  const int m = static_cast<int>(f.clauses.size());
  if (n < 1 || m < 1) throw InstanceError("the construction needs at least one variable and one clause");
  for (const auto& c : f.clauses)
    for (int t : c)
      if (t < 0 || t >= n) throw InstanceError("clause variable index out of range");

  // Gadgets in cycle order: blocks j = 1..m, variables ascending in odd
  // blocks and descending in even ones, each block closed by its clause
  // gadget. Junctions take the name "<entered gadget>.s"; the final junction
  // wraps around to the very first.
  struct Gadget {
    bool clause;
    int i, j;  // variable index (1-based) and block, or (0, j) for clause j
  };
  std::vector<Gadget> walkplan;
  for (int j = 1; j <= m; ++j) {
    if (j % 2 == 1)
      for (int i = 1; i <= n; ++i) walkplan.push_back({false, i, j});
    else
      for (int i = n; i >= 1; --i) walkplan.push_back({false, i, j});
    walkplan.push_back({true, 0, j});
  }

  auto base_of = [&](const Gadget& g) { return g.clause ? cb(g.j) : vb(g.i, g.j); };
  std::vector<std::string> cyc;
  cyc.push_back(base_of(walkplan.front()) + ".s");
  for (size_t t = 0; t < walkplan.size(); ++t) {
    const std::string base = base_of(walkplan[t]);
    if (!walkplan[t].clause) {
      for (const char* part : {".u", ".w", ".v", ".z", ".r"}) cyc.push_back(base + part);
    } else {
      for (const char* part : {".al", ".ya", ".be", ".yb", ".d1", ".d2", ".d3", ".d4", ".d5",
                               ".d6", ".ga", ".yc", ".de"})
        cyc.push_back(base + part);
    }
    if (t + 1 < walkplan.size()) cyc.push_back(base_of(walkplan[t + 1]) + ".s");
  }

  std::vector<std::vector<NamePair>> ex(3);
  std::vector<NamePair> memberships;
  for (int j = 1; j <= m; ++j) {
    for (int i = 1; i <= n; ++i) {
      const std::string b = vb(i, j);
      ex[2].push_back(np(b + ".u", b + ".v"));
      ex[2].push_back(np(b + ".w", b + ".z"));
    }
    const std::string c = cb(j);
    ex[2].push_back(np(c + ".al", c + ".be"));
    ex[2].push_back(np(c + ".be", c + ".ga"));
    ex[2].push_back(np(c + ".ga", c + ".de"));
    ex[2].push_back(np(c + ".d1", c + ".d3"));
    ex[2].push_back(np(c + ".d2", c + ".d4"));
    ex[2].push_back(np(c + ".d3", c + ".d5"));
    ex[2].push_back(np(c + ".d4", c + ".d6"));
    ex[0].push_back(np(c + ".be", c + ".d3"));
    ex[0].push_back(np(c + ".d4", c + ".ga"));

    // Membership edges: clause variables sorted so the member nearest the
    // clause gadget in the walk takes the first slot, keeping the three
    // connections mutually nested; every other variable parks on its own
    // gadget.
    std::array<int, 3> vars = f.clauses[j - 1];
    std::sort(vars.begin(), vars.end());
    if (j % 2 == 1) std::reverse(vars.begin(), vars.end());
    const std::array<const char*, 3> slots{".ya", ".yb", ".yc"};
    std::set<int> in_clause;
    for (int t = 0; t < 3; ++t) {
      memberships.push_back(np(vb(vars[t] + 1, j) + ".w", c + slots[t]));
      in_clause.insert(vars[t] + 1);
    }
    for (int i = 1; i <= n; ++i)
      if (!in_clause.count(i)) memberships.push_back(np(vb(i, j) + ".w", vb(i, j) + ".r"));
  }
  for (int j = 1; j < m; ++j)
    for (int i = 1; i <= n; ++i)
      ex[j % 2 == 1 ? 1 : 0].push_back(np(vb(i, j) + ".w", vb(i, j + 1) + ".w"));

  HardnessInstance out;
  {
    // Memberships must be pairwise non-alternating (checked below on the
    // finished instance), and graphs 0 and 1 must stay free of alternating
    // pairs so their chords all nest.
    auto all3 = ex;
    all3[2].insert(all3[2].end(), memberships.begin(), memberships.end());
    out.instance = make_cycle_instance(cyc, all3);
  }
  const Instance& inst = out.instance;
  auto check_no_alternation = [&](const std::vector<NamePair>& pairs, const char* what) {
    std::vector<Edge> edges;
    for (const auto& [a, b] : pairs) edges.emplace_back(inst.id_of(a), inst.id_of(b));
    for (size_t i = 0; i < edges.size(); ++i)
      for (size_t j = i + 1; j < edges.size(); ++j)
        if (alternate(inst, edges[i], edges[j]))
          throw InternalCheckError(std::string("construction broke the nesting of ") + what);
  };
  std::vector<NamePair> g0, g1;
  for (const Edge& e : inst.exclusive[0]) g0.push_back(np(inst.names[e.u], inst.names[e.v]));
  for (const Edge& e : inst.exclusive[1]) g1.push_back(np(inst.names[e.u], inst.names[e.v]));
  check_no_alternation(g0, "graph-0 edges");
  check_no_alternation(g1, "graph-1 edges");
  check_no_alternation(memberships, "membership edges");
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    if (inst.degree(v, 0) > 3 || inst.degree(v, 1) > 3)
      throw InternalCheckError("construction exceeded degree three in a helper graph");
  }

  for (int i = 1; i <= n; ++i)
    out.truth_edges.emplace_back(inst.id_of(vb(i, 1) + ".u"), inst.id_of(vb(i, 1) + ".v"));
  return out;
}

HardnessInstance generate_theorem4(const PositiveFormula& f) {
  HardnessInstance three = generate_theorem3(f);
  const Instance& src = three.instance;

  std::vector<std::string> cyc;
  for (VertexId v : *src.cycle) cyc.push_back(src.names[v]);

  std::vector<std::vector<NamePair>> ex(2);
  for (const Edge& e : src.exclusive[0]) ex[0].push_back(np(src.names[e.u], src.names[e.v]));
  for (const Edge& e : src.exclusive[2]) ex[1].push_back(np(src.names[e.u], src.names[e.v]));

  std::vector<std::string> isolated;
  int t = 0;
  for (const Edge& e : src.exclusive[1]) {
    const std::string q1 = "p" + std::to_string(t) + ".q1";
    const std::string q2 = "p" + std::to_string(t) + ".q2";
    ++t;
    isolated.push_back(q1);
    isolated.push_back(q2);
    ex[0].push_back(np(src.names[e.u], q1));
    ex[1].push_back(np(q1, q2));
    ex[0].push_back(np(q2, src.names[e.v]));
  }

  HardnessInstance out;
  out.instance = make_cycle_instance(cyc, ex, isolated);
  for (const Edge& e : three.truth_edges)
    out.truth_edges.emplace_back(out.instance.id_of(src.names[e.u]),
                                 out.instance.id_of(src.names[e.v]));
  return out;
}

std::vector<bool> decode_truth(const HardnessInstance& h, const SideAssignment& a) {
  std::vector<bool> truth;
  for (const Edge& e : h.truth_edges) {
    auto it = a.find(e);
    if (it == a.end()) throw InstanceError("assignment does not cover a truth edge");
    truth.push_back(it->second == Side::Left);
  }
  return truth;
}

Instance generate_random(const RandomSpec& spec) {
  if (spec.n < 3) throw InstanceError("random instances need at least three vertices");
  if (spec.k < 2) throw InstanceError("random instances need at least two graphs");
  std::mt19937_64 rng(spec.seed);
  std::vector<std::string> names;
  for (int i = 0; i < spec.n; ++i) names.push_back("v" + std::to_string(i));

  std::set<std::pair<int, int>> used;  // all edges, shared and exclusive
  std::vector<int> shared_deg(spec.n, 2);
  std::vector<NamePair> shared;
  for (int i = 0; i < spec.n; ++i) {
    const int j = (i + 1) % spec.n;
    used.insert(std::minmax(i, j));
    shared.push_back(np(names[i], names[j]));
  }
  if (spec.biconnected) {
    int added = 0;
    for (int tries = 0; tries < 40 * std::max(1, spec.shared_chords) && added < spec.shared_chords;
         ++tries) {
      const int u = static_cast<int>(rng() % spec.n), v = static_cast<int>(rng() % spec.n);
      if (u == v || used.count(std::minmax(u, v))) continue;
      if (shared_deg[u] >= 3 || shared_deg[v] >= 3) continue;  // keep rotations enumerable
      used.insert(std::minmax(u, v));
      shared.push_back(np(names[u], names[v]));
      ++shared_deg[u];
      ++shared_deg[v];
      ++added;
    }
  }

  std::vector<std::vector<NamePair>> ex(spec.k);
  std::vector<std::vector<int>> excl_deg(spec.k, std::vector<int>(spec.n, 0));
  std::vector<int> union_excl(spec.n, 0);
  int added = 0;
  for (int tries = 0; tries < 60 * std::max(1, spec.max_exclusive) && added < spec.max_exclusive;
       ++tries) {
    const int g = static_cast<int>(rng() % spec.k);
    const int u = static_cast<int>(rng() % spec.n), v = static_cast<int>(rng() % spec.n);
    if (u == v || used.count(std::minmax(u, v))) continue;
    if (shared_deg[u] + excl_deg[g][u] >= 4 || shared_deg[v] + excl_deg[g][v] >= 4) continue;
    if (shared_deg[u] + union_excl[u] >= spec.union_max_degree) continue;
    if (shared_deg[v] + union_excl[v] >= spec.union_max_degree) continue;
    used.insert(std::minmax(u, v));
    ex[g].push_back(np(names[u], names[v]));
    ++excl_deg[g][u];
    ++excl_deg[g][v];
    ++union_excl[u];
    ++union_excl[v];
    ++added;
  }

  if (!spec.biconnected) return make_cycle_instance(names, ex);
  return make_shared_instance(names, shared, ex);
}

}  // namespace orthosefe
