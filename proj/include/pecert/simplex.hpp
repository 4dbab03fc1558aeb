#pragma once

#include <array>
#include <vector>

namespace pecert {

// Dense two-phase primal simplex for the small LPs in this project
// (convex-roof entropy, hull membership, max-prob estimators). Problems
// here have at most a few dozen rows and a few thousand columns.

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpProblem {
  // minimize c.x subject to A x = b, x >= 0; A is row-major m x n
  int m = 0, n = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
};

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;  // size n
  std::vector<double> y;  // duals per row, 0 for redundant rows
};

// Bland's rule throughout (these LPs are tiny and often degenerate);
// redundant equality rows are detected in phase 1 and dropped.
LpSolution solve_lp(const LpProblem& p, long max_iter = 200000);

// L-infinity distance from target to the convex hull of pts (0 if inside).
double hull_distance(const std::vector<std::array<double, 16>>& pts,
                     const std::array<double, 16>& target);

}  // namespace pecert
