#include "pecert/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pecert {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kZeroTol = 1e-10;

// Tableau layout: rows 0..m-1 are constraints, columns 0..n-1 the original
// variables, n..n+m-1 the artificials, column n+m the right-hand side.
// reduced[j] = c_j - z_j, so a column may enter while reduced < -tol and
// the dual of row i is -reduced[n+i] at phase-2 optimality.
struct Tableau {
  int m, n;
  int width;
  std::vector<double> t;
  std::vector<int> basis;       // basic variable per active row
  std::vector<char> row_alive;  // redundant rows get dropped
  std::vector<double> reduced;
  std::vector<char> blocked;    // artificials are blocked in phase 2

  double& at(int r, int j) { return t[static_cast<size_t>(r) * width + j]; }

  void pivot(int r, int jc) {
    double piv = at(r, jc);
    double inv = 1.0 / piv;
    for (int j = 0; j <= n + m; ++j) at(r, j) *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || !row_alive[i]) continue;
      double f = at(i, jc);
      if (f == 0.0) continue;
      for (int j = 0; j <= n + m; ++j) at(i, j) -= f * at(r, j);
    }
    double f = reduced[jc];
    if (f != 0.0)
      for (int j = 0; j <= n + m; ++j) reduced[j] -= f * at(r, j);
    basis[r] = jc;
  }

  // Bland: entering column is the lowest-index eligible one
  int entering() const {
    for (int j = 0; j < n + m; ++j)
      if (!blocked[j] && reduced[j] < -kPivotTol) return j;
    return -1;
  }

  // leaving row by min ratio, ties broken by lowest basis index
  int leaving(int jc) {
    int row = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (!row_alive[i]) continue;
      double aij = at(i, jc);
      if (aij <= kPivotTol) continue;
      double ratio = at(i, n + m) / aij;
      if (ratio < best - kZeroTol || (ratio < best + kZeroTol && (row < 0 || basis[i] < basis[row]))) {
        best = ratio;
        row = i;
      }
    }
    return row;
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, long max_iter) {
  const int m = p.m, n = p.n;
  if (static_cast<int>(p.a.size()) != m * n || static_cast<int>(p.b.size()) != m ||
      static_cast<int>(p.c.size()) != n)
    throw std::invalid_argument("solve_lp: inconsistent dimensions");

  Tableau tb;
  tb.m = m;
  tb.n = n;
  tb.width = n + m + 1;
  tb.t.assign(static_cast<size_t>(m) * tb.width, 0.0);
  tb.basis.resize(m);
  tb.row_alive.assign(m, 1);
  tb.reduced.assign(n + m + 1, 0.0);
  tb.blocked.assign(n + m, 0);

  for (int i = 0; i < m; ++i) {
    double sign = p.b[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tb.at(i, j) = sign * p.a[static_cast<size_t>(i) * n + j];
    tb.at(i, n + i) = 1.0;
    tb.at(i, n + m) = sign * p.b[i];
    tb.basis[i] = n + i;
  }

  // phase 1: minimize the sum of artificials
  for (int j = 0; j <= n + m; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += tb.at(i, j);
    tb.reduced[j] = (j >= n && j < n + m ? 1.0 : 0.0) - s;
  }

  LpSolution sol;
  long iter = 0;
  auto run = [&]() -> bool {
    while (true) {
      int jc = tb.entering();
      if (jc < 0) return true;
      int r = tb.leaving(jc);
      if (r < 0) {
        sol.status = LpStatus::Unbounded;
        return false;
      }
      tb.pivot(r, jc);
      if (++iter > max_iter) {
        sol.status = LpStatus::IterationLimit;
        return false;
      }
    }
  };

  if (!run()) return sol;
  double phase1 = -tb.reduced[n + m];
  if (phase1 > 1e-7) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }

  // drive artificials out of the basis; rows with no pivot are redundant.
  // The basic artificial sits at level ~0, so any pivot keeps feasibility;
  // take the largest entry to avoid amplifying phase-1 residue.
  for (int i = 0; i < m; ++i) {
    if (!tb.row_alive[i] || tb.basis[i] < n) continue;
    int jc = -1;
    double best = kPivotTol;
    for (int j = 0; j < n; ++j)
      if (std::fabs(tb.at(i, j)) > best) {
        best = std::fabs(tb.at(i, j));
        jc = j;
      }
    if (jc >= 0) {
      tb.pivot(i, jc);
    } else {
      tb.row_alive[i] = 0;
    }
  }

  // phase 2: original costs, artificials blocked
  for (int j = 0; j < m; ++j) tb.blocked[n + j] = 1;
  for (int j = 0; j <= n + m; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      if (tb.row_alive[i] && tb.basis[i] < n) s += p.c[tb.basis[i]] * tb.at(i, j);
    tb.reduced[j] = (j < n ? p.c[j] : 0.0) - s;
  }
  if (!run()) return sol;

  sol.status = LpStatus::Optimal;
  sol.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (tb.row_alive[i] && tb.basis[i] < n) sol.x[tb.basis[i]] = tb.at(i, n + m);
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += p.c[j] * sol.x[j];
  sol.y.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (!tb.row_alive[i]) continue;
    double yi = -tb.reduced[n + i];
    // artificial columns were built against the sign-flipped rows
    sol.y[i] = p.b[i] < 0.0 ? -yi : yi;
  }
  return sol;
}

double hull_distance(const std::vector<std::array<double, 16>>& pts,
                     const std::array<double, 16>& target) {
  if (pts.empty()) throw std::invalid_argument("hull_distance: no points");
  const int k = static_cast<int>(pts.size());
  // variables: lambda (k), t, slack+ (16), slack- (16)
  // rows: (V lambda)_e - t + s+_e = target_e
  //       (V lambda)_e + t - s-_e = target_e  -> negate to keep x >= 0 form:
  //       -(V lambda)_e - t + s-_e = -target_e
  //       sum lambda = 1
  LpProblem p;
  p.m = 33;
  p.n = k + 1 + 32;
  p.a.assign(static_cast<size_t>(p.m) * p.n, 0.0);
  p.b.assign(p.m, 0.0);
  p.c.assign(p.n, 0.0);
  p.c[k] = 1.0;
  auto a = [&](int i, int j) -> double& { return p.a[static_cast<size_t>(i) * p.n + j]; };
  for (int e = 0; e < 16; ++e) {
    for (int j = 0; j < k; ++j) {
      a(e, j) = pts[j][e];
      a(16 + e, j) = -pts[j][e];
    }
    a(e, k) = -1.0;
    a(16 + e, k) = -1.0;
    a(e, k + 1 + e) = 1.0;
    a(16 + e, k + 1 + 16 + e) = 1.0;
    p.b[e] = target[e];
    p.b[16 + e] = -target[e];
  }
  for (int j = 0; j < k; ++j) a(32, j) = 1.0;
  p.b[32] = 1.0;
  LpSolution s = solve_lp(p);
  if (s.status != LpStatus::Optimal) throw std::runtime_error("hull_distance: LP failed");
  return s.objective;
}

}  // namespace pecert
