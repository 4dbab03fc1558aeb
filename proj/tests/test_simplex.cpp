// LP solver behavior on hand-checkable problems plus hull membership.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "pecert/bellmodel.hpp"
#include "pecert/datasets.hpp"
#include "pecert/simplex.hpp"

using namespace pecert;

TEST_CASE("textbook optimum with known primal and duals") {
  // min -x1 - 2 x2  s.t.  x1 + x2 + s1 = 4,  x2 + s2 = 3
  LpProblem p;
  p.m = 2;
  p.n = 4;
  p.a = {1, 1, 1, 0, 0, 1, 0, 1};
  p.b = {4, 3};
  p.c = {-1, -2, 0, 0};
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-7.0).epsilon(1e-12));
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.x[1] == doctest::Approx(3.0).epsilon(1e-12));
  // duals: y1 from the binding first row, y2 from the second
  CHECK(s.y[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.y[1] == doctest::Approx(-1.0).epsilon(1e-12));
  // complementary slackness: c - A^T y >= 0 with equality on the basis
  for (int j = 0; j < p.n; ++j) {
    double red = p.c[j];
    for (int i = 0; i < p.m; ++i) red -= s.y[i] * p.a[i * p.n + j];
    CHECK(red >= -1e-9);
    if (s.x[j] > 1e-9) CHECK(std::fabs(red) < 1e-9);
  }
}

TEST_CASE("infeasible system is reported, not mangled") {
  // x1 = 1 and x1 = 2 cannot both hold
  LpProblem p;
  p.m = 2;
  p.n = 1;
  p.a = {1, 1};
  p.b = {1, 2};
  p.c = {1};
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded ray is detected") {
  // min -x1 with x1 - x2 = 0: push both to infinity
  LpProblem p;
  p.m = 1;
  p.n = 2;
  p.a = {1, -1};
  p.b = {0};
  p.c = {-1, 0};
  CHECK(solve_lp(p).status == LpStatus::Unbounded);
}

TEST_CASE("negative right-hand sides are handled by row scaling") {
  // min x1 s.t. -x1 + x2 = -2  ->  x1 = 2 + x2, optimum x = (2, 0)
  LpProblem p;
  p.m = 1;
  p.n = 2;
  p.a = {-1, 1};
  p.b = {-2};
  p.c = {1, 0};
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("redundant equality rows do not block phase 1") {
  // duplicated constraint x1 + x2 = 1
  LpProblem p;
  p.m = 2;
  p.n = 2;
  p.a = {1, 1, 1, 1};
  p.b = {1, 1};
  p.c = {1, 2};
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate vertex does not cycle under Bland pivoting") {
  // classic degeneracy: three planes through one vertex
  LpProblem p;
  p.m = 3;
  p.n = 5;
  p.a = {1, 0, 1, 0, 0,
         0, 1, 0, 1, 0,
         1, 1, 0, 0, 1};
  p.b = {1, 1, 2};
  p.c = {-3, -1, 0, 0, 0};
  LpSolution s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("hull membership of the embedded tables") {
  Model q = make_model(PolytopeKind::Q);
  std::vector<std::array<double, 16>> pts;
  for (const auto& v : q.vertices) pts.push_back(v.p);

  for (const char* name : {"atoms", "ions"}) {
    JointDistribution rho =
        JointDistribution::combine(embedded_dataset(name), uniform_settings());
    CHECK(hull_distance(pts, rho.p) <= 1e-9);
  }

  // a PR box sits outside the Tsirelson-constrained hull at L-inf ~ q/4
  auto ns = conditional_extreme_points(PolytopeKind::NS);
  JointDistribution pr = JointDistribution::combine(ns[20], uniform_settings());
  double d = hull_distance(pts, pr.p);
  CHECK(d > 0.01);
  Model nsm = make_model(PolytopeKind::NS);
  std::vector<std::array<double, 16>> nspts;
  for (const auto& v : nsm.vertices) nspts.push_back(v.p);
  CHECK(hull_distance(nspts, pr.p) <= 1e-12);
}

TEST_CASE("hull distance of an exterior point is the exact L-infinity gap") {
  // hull = segment from (0,...) to e0; target 2*e0 lies 1.0 outside
  std::array<double, 16> zero{}, e0{}, target{};
  e0[0] = 1.0;
  target[0] = 2.0;
  CHECK(hull_distance({zero, e0}, target) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(hull_distance({zero, e0}, e0) <= 1e-12);
}
