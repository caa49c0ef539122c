#pragma once

#include <optional>
#include <string>
#include <vector>

namespace orthosefe {

// Not-all-equal SAT formula. Literals are DIMACS-style: +v means variable v,
// -v its negation, variables 1-indexed. A clause is satisfied when it
// contains at least one true and at least one false literal.
struct NaeFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

// True iff every clause of f is not-all-equal under the assignment
// (assignment[i] is the value of variable i+1).
bool nae_eval(const NaeFormula& f, const std::vector<bool>& assignment);

// Deterministic backtracking search: branch on the lowest-index unassigned
// variable, trying false before true, so the first satisfying assignment in
// lexicographic order (false < true) is returned; nullopt when unsatisfiable.
std::optional<std::vector<bool>> nae_solve(const NaeFormula& f);

// DIMACS-like dump: header "p nae <vars> <clauses>", then one
// zero-terminated literal line per clause.
std::string dump_formula(const NaeFormula& f);

// Planarity of the bipartite variable/clause incidence graph.
bool formula_graph_planar(const NaeFormula& f);

}  // namespace orthosefe
