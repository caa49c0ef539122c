#include "orthosefe/naesat.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

namespace orthosefe {

namespace {

bool literal_value(int lit, const std::vector<bool>& assignment) {
  const int v = lit > 0 ? lit : -lit;
  const bool val = assignment[v - 1];
  return lit > 0 ? val : !val;
}

bool clause_nae(const std::vector<int>& clause, const std::vector<bool>& assignment) {
  bool seen_true = false, seen_false = false;
  for (int lit : clause) (literal_value(lit, assignment) ? seen_true : seen_false) = true;
  return seen_true && seen_false;
}

}  // namespace

bool nae_eval(const NaeFormula& f, const std::vector<bool>& assignment) {
  if (static_cast<int>(assignment.size()) < f.num_vars)
    throw std::invalid_argument("assignment shorter than the number of variables");
  for (const auto& clause : f.clauses)
    if (!clause_nae(clause, assignment)) return false;
  return true;
}

std::optional<std::vector<bool>> nae_solve(const NaeFormula& f) {
  const int n = f.num_vars;
  const int m = static_cast<int>(f.clauses.size());
  for (const auto& clause : f.clauses)
    for (int lit : clause) {
      const int v = lit > 0 ? lit : -lit;
      if (v < 1 || v > n) throw std::invalid_argument("clause mentions a variable beyond num_vars");
    }
  for (const auto& clause : f.clauses)
    if (clause.empty()) return std::nullopt;  // a variable-free clause is never not-all-equal

  // Backtracking search with unit propagation: a clause whose assigned literals
  // all evaluate alike and which has exactly one unassigned occurrence forces
  // that occurrence to the opposite value. Branching always picks the lowest
  // unassigned variable and tries false first; since propagation only assigns
  // implied values, the first solution found is the lexicographically least one
  // (false < true), matching the exhaustive reference.
  std::vector<std::vector<std::pair<int, bool>>> occurs(n + 1);  // var -> (clause, positive?)
  for (int c = 0; c < m; ++c)
    for (int lit : f.clauses[c]) occurs[lit > 0 ? lit : -lit].push_back({c, lit > 0});

  std::vector<signed char> value(n + 1, -1);  // -1 unassigned, else 0/1
  std::vector<int> true_count(m, 0), false_count(m, 0), open_count(m);
  for (int c = 0; c < m; ++c) open_count[c] = static_cast<int>(f.clauses[c].size());

  std::vector<int> trail;  // assigned variables, in assignment order
  const auto assign = [&](int v, bool b) -> bool {
    value[v] = b ? 1 : 0;
    trail.push_back(v);
    bool ok = true;  // keep updating every counter so unwind_to stays symmetric
    for (const auto& [c, positive] : occurs[v]) {
      (positive == b ? true_count[c] : false_count[c])++;
      open_count[c]--;
      if (open_count[c] == 0 && (true_count[c] == 0 || false_count[c] == 0)) ok = false;
    }
    return ok;
  };
  const auto unwind_to = [&](size_t mark) {
    while (trail.size() > mark) {
      const int v = trail.back();
      trail.pop_back();
      for (const auto& [c, positive] : occurs[v]) {
        (positive == (value[v] == 1) ? true_count[c] : false_count[c])--;
        open_count[c]++;
      }
      value[v] = -1;
    }
  };
  const auto propagate = [&]() -> bool {
    for (bool changed = true; changed;) {
      changed = false;
      for (int c = 0; c < m; ++c) {
        if (open_count[c] != 1 || (true_count[c] != 0 && false_count[c] != 0)) continue;
        int forced = 0;
        for (int lit : f.clauses[c])
          if (value[lit > 0 ? lit : -lit] < 0) {
            forced = lit;
            break;
          }
        const bool literal_true = true_count[c] == 0;  // clause still needs this polarity
        if (!assign(forced > 0 ? forced : -forced, forced > 0 ? literal_true : !literal_true))
          return false;
        changed = true;
      }
    }
    return true;
  };

  std::vector<int> decision_var, decision_mark, decision_tried;
  if (!propagate()) return std::nullopt;
  while (true) {
    int v = 1;
    while (v <= n && value[v] >= 0) ++v;
    if (v > n) {
      std::vector<bool> assignment(n);
      for (int i = 1; i <= n; ++i) assignment[i - 1] = value[i] == 1;
      return assignment;
    }
    decision_var.push_back(v);
    decision_mark.push_back(static_cast<int>(trail.size()));
    decision_tried.push_back(0);
    if (assign(v, false) && propagate()) continue;
    for (;;) {  // conflict: revisit the most recent decision with an untried value
      if (decision_var.empty()) return std::nullopt;
      unwind_to(static_cast<size_t>(decision_mark.back()));
      if (decision_tried.back() == 0) {
        decision_tried.back() = 1;
        if (assign(decision_var.back(), true) && propagate()) break;
      } else {
        decision_var.pop_back();
        decision_mark.pop_back();
        decision_tried.pop_back();
      }
    }
  }
}

std::string dump_formula(const NaeFormula& f) {
  std::ostringstream out;
  out << "p nae " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& clause : f.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

bool formula_graph_planar(const NaeFormula& f) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  Graph g(f.num_vars + f.clauses.size());
  for (size_t c = 0; c < f.clauses.size(); ++c) {
    std::set<int> vars;
    for (int lit : f.clauses[c]) vars.insert(lit > 0 ? lit : -lit);
    for (int v : vars) boost::add_edge(v - 1, f.num_vars + c, g);
  }
  return boost::boyer_myrvold_planarity_test(g);
}

}  // namespace orthosefe
