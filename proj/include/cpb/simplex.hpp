#pragma once

#include <vector>

#include "cpb/rational.hpp"

namespace cpb {

// Exact simplex over rationals for small LPs in the form
//   max c'y  subject to  A y <= b,  y >= 0,
// with b >= 0 so the slack basis is feasible from the start. Bland's rule
// is used throughout, which rules out cycling.
//
// `duals[i]` is the optimal multiplier of constraint i (the reduced cost of
// its slack), i.e. the optimal solution of the dual LP
//   min b'x  subject to  A' x >= c,  x >= 0.
struct LpSolution {
  Rational objective;
  std::vector<Rational> y;      // primal variables
  std::vector<Rational> duals;  // one per constraint row
};

LpSolution solve_max_lp(const std::vector<std::vector<Rational>>& a,
                        const std::vector<Rational>& b,
                        const std::vector<Rational>& c);

}  // namespace cpb
