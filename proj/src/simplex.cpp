#include "cpb/simplex.hpp"

#include <stdexcept>

namespace cpb {

namespace {

// Tableau layout: rows 0..r-1 are constraints, row r is the objective.
// Columns 0..c-1 are the structural variables, c..c+r-1 the slacks and the
// last column the right-hand side. The objective row stores reduced costs,
// so entries start at -c_j and the optimum is reached when none is negative.
struct Tableau {
  int rows, cols;
  std::vector<std::vector<Rational>> t;
  std::vector<int> basis;  // basic variable of each constraint row

  Tableau(const std::vector<std::vector<Rational>>& a,
          const std::vector<Rational>& b, const std::vector<Rational>& c)
      : rows(static_cast<int>(a.size())), cols(static_cast<int>(c.size())) {
    t.assign(rows + 1, std::vector<Rational>(cols + rows + 1));
    basis.resize(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) t[i][j] = a[i][j];
      t[i][cols + i] = Rational(1);
      t[i][cols + rows] = b[i];
      basis[i] = cols + i;
    }
    for (int j = 0; j < cols; ++j) t[rows][j] = -c[j];
  }

  void pivot(int pr, int pc) {
    const Rational inv = Rational(1) / t[pr][pc];
    for (auto& v : t[pr]) v *= inv;
    for (int i = 0; i <= rows; ++i) {
      if (i == pr || t[i][pc].is_zero()) continue;
      const Rational f = t[i][pc];
      for (int j = 0; j <= cols + rows; ++j) {
        if (!t[pr][j].is_zero()) t[i][j] -= f * t[pr][j];
      }
    }
    basis[pr] = pc;
  }
};

}  // namespace

LpSolution solve_max_lp(const std::vector<std::vector<Rational>>& a,
                        const std::vector<Rational>& b,
                        const std::vector<Rational>& c) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("solve_max_lp: row count mismatch");
  }
  for (const auto& bi : b) {
    if (bi < Rational(0)) {
      throw std::invalid_argument("solve_max_lp: requires b >= 0");
    }
  }

  Tableau tab(a, b, c);
  const int rhs = tab.cols + tab.rows;

  for (;;) {
    // Bland: entering variable = lowest-index column with negative reduced
    // cost.
    int pc = -1;
    for (int j = 0; j < rhs; ++j) {
      if (tab.t[tab.rows][j] < Rational(0)) {
        pc = j;
        break;
      }
    }
    if (pc < 0) break;

    // Ratio test; ties broken by the smallest basic variable index (Bland).
    int pr = -1;
    Rational best;
    for (int i = 0; i < tab.rows; ++i) {
      if (tab.t[i][pc] > Rational(0)) {
        Rational ratio = tab.t[i][rhs] / tab.t[i][pc];
        if (pr < 0 || ratio < best ||
            (ratio == best && tab.basis[i] < tab.basis[pr])) {
          pr = i;
          best = ratio;
        }
      }
    }
    if (pr < 0) throw std::runtime_error("solve_max_lp: unbounded LP");
    tab.pivot(pr, pc);
  }

  LpSolution sol;
  sol.objective = tab.t[tab.rows][rhs];
  sol.y.assign(tab.cols, Rational(0));
  for (int i = 0; i < tab.rows; ++i) {
    if (tab.basis[i] < tab.cols) sol.y[tab.basis[i]] = tab.t[i][rhs];
  }
  sol.duals.resize(tab.rows);
  for (int i = 0; i < tab.rows; ++i) {
    sol.duals[i] = tab.t[tab.rows][tab.cols + i];
  }
  return sol;
}

}  // namespace cpb
