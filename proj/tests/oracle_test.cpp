// The checkers and closed-form oracles are load-bearing for every solver
// test, so they get exercised on hand-built certificates first.
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace dncuc;
using namespace dncuc::testing;

namespace {

// min x0 + x1  s.t. x0 + x1 >= 2, x0 - x1 <= 1, x >= 0.
LpProblem small_lp() {
  LpProblem p;
  p.add_var(0, kInf, 1.0);
  p.add_var(0, kInf, 1.0);
  p.add_row(RowSense::ge, 2.0, {{0, 1.0}, {1, 1.0}});
  p.add_row(RowSense::le, 1.0, {{0, 1.0}, {1, -1.0}});
  return p;
}

}  // namespace

TEST(OptimalCert, AcceptsHandSolution) {
  LpProblem p = small_lp();
  LpSolution s;
  s.status = LpStatus::optimal;
  s.x = {0.0, 2.0};      // any split works; take x0 at its lower bound
  s.y = {1.0, 0.0};      // >= row active with dual 1
  s.redcost = {0.0, 0.0};
  s.objective = 2.0;
  EXPECT_TRUE(check_optimal(p, s).ok) << check_optimal(p, s).why;
}

TEST(OptimalCert, RejectsCorruptions) {
  LpProblem p = small_lp();
  LpSolution s;
  s.status = LpStatus::optimal;
  s.x = {0.0, 2.0};
  s.y = {1.0, 0.0};
  s.redcost = {0.0, 0.0};
  s.objective = 2.0;

  {
    LpSolution bad = s;
    bad.x = {0.0, 1.0};  // violates the >= row
    EXPECT_FALSE(check_optimal(p, bad).ok);
  }
  {
    LpSolution bad = s;
    bad.y = {-1.0, 0.0};  // wrong dual sign on >=
    bad.redcost = {2.0, 2.0};
    EXPECT_FALSE(check_optimal(p, bad).ok);
  }
  {
    LpSolution bad = s;
    bad.objective = 1.0;  // claimed objective disagrees with x
    EXPECT_FALSE(check_optimal(p, bad).ok);
  }
  {
    LpSolution bad = s;
    bad.x = {0.5, 1.5};  // feasible and objective-consistent...
    bad.objective = 2.0;
    bad.y = {0.0, 0.0};  // ...but stationarity fails: c != A'y at interior x
    bad.redcost = {1.0, 1.0};
    EXPECT_FALSE(check_optimal(p, bad).ok);
  }
  {
    LpSolution bad = s;
    bad.y = {0.0, 0.0};  // dual slack on the active row: redcost 1 at x1 interior
    bad.redcost = {1.0, 1.0};
    bad.x = {0.0, 2.0};
    EXPECT_FALSE(check_optimal(p, bad).ok);
  }
}

TEST(FarkasCert, AcceptsAndRejects) {
  // x >= 2 and x <= 1 cannot both hold.
  LpProblem p;
  p.add_var(-kInf, kInf, 0.0);
  p.add_row(RowSense::ge, 2.0, {{0, 1.0}});
  p.add_row(RowSense::le, 1.0, {{0, 1.0}});
  EXPECT_TRUE(check_farkas(p, {1.0, -1.0}).ok);   // w = 0, y'b = 1 > 0
  EXPECT_FALSE(check_farkas(p, {-1.0, 1.0}).ok);  // signs flipped
  EXPECT_FALSE(check_farkas(p, {0.0, 0.0}).ok);   // zero certificate
  EXPECT_FALSE(check_farkas(p, {1.0, 0.0}).ok);   // escapes through +inf bound

  // Feasible system: no valid certificate exists.
  LpProblem f;
  f.add_var(0.0, 5.0, 0.0);
  f.add_row(RowSense::ge, 2.0, {{0, 1.0}});
  EXPECT_FALSE(check_farkas(f, {1.0}).ok);
}

TEST(RayCert, AcceptsAndRejects) {
  // min -x0 s.t. x0 - x1 <= 1, x >= 0: ray (1, 1).
  LpProblem p;
  p.add_var(0, kInf, -1.0);
  p.add_var(0, kInf, 0.0);
  p.add_row(RowSense::le, 1.0, {{0, 1.0}, {1, -1.0}});
  EXPECT_TRUE(check_ray(p, {1.0, 1.0}).ok);
  EXPECT_FALSE(check_ray(p, {1.0, 0.0}).ok);   // drifts up on <=
  EXPECT_FALSE(check_ray(p, {0.0, 1.0}).ok);   // not improving
  EXPECT_FALSE(check_ray(p, {-1.0, -1.0}).ok); // leaves through finite bounds
  EXPECT_FALSE(check_ray(p, {0.0, 0.0}).ok);
}

TEST(FeasibleCheck, RowsBoundsAndIntegrality) {
  LpProblem p = small_lp();
  EXPECT_TRUE(check_feasible(p, {1.0, 1.0}).ok);
  EXPECT_FALSE(check_feasible(p, {0.0, 1.0}).ok);
  EXPECT_FALSE(check_feasible(p, {-1.0, 3.0}).ok);
  EXPECT_TRUE(check_feasible(p, {1.0, 1.0}, {0, 1}).ok);
  EXPECT_FALSE(check_feasible(p, {0.5, 1.5}, {0}).ok);
}

TEST(BoxQp, MatchesGridSearch) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 1 + rng() % 4;
    std::vector<double> c(n), q(n), m(n), lb(n), ub(n);
    for (size_t j = 0; j < n; ++j) {
      c[j] = U(rng);
      q[j] = 0.2 + std::fabs(U(rng));
      m[j] = U(rng);
      lb[j] = U(rng) - 2.0;
      ub[j] = lb[j] + 0.5 + std::fabs(U(rng));
    }
    auto x = box_qp_oracle(c, q, m, lb, ub);
    double vx = separable_qp_value(c, q, m, x);
    // Coordinate-wise grid probe must never beat the claimed optimum.
    for (size_t j = 0; j < n; ++j) {
      for (int s = 0; s <= 100; ++s) {
        auto xx = x;
        xx[j] = lb[j] + (ub[j] - lb[j]) * s / 100.0;
        EXPECT_GE(separable_qp_value(c, q, m, xx), vx - 1e-9);
      }
    }
  }
}

TEST(KnapsackQp, MatchesDenseGridSearch) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    size_t n = 2;
    std::vector<double> c(n), q(n), m(n), a(n), lb(n), ub(n);
    for (size_t j = 0; j < n; ++j) {
      c[j] = U(rng);
      q[j] = 0.3 + std::fabs(U(rng));
      m[j] = U(rng);
      a[j] = rng() % 2 ? 1.0 : -1.0;
      lb[j] = -2.0;
      ub[j] = 2.0;
    }
    double b = U(rng);
    auto sol = knapsack_qp_oracle(c, q, m, a, b, lb, ub);
    ASSERT_TRUE(sol.has_value());
    double resid = a[0] * (*sol)[0] + a[1] * (*sol)[1] - b;
    EXPECT_NEAR(resid, 0.0, 1e-7);
    double vbest = separable_qp_value(c, q, m, *sol);
    // Dense sweep over x0 with x1 forced by the equality.
    for (int s = 0; s <= 400; ++s) {
      double x0 = lb[0] + (ub[0] - lb[0]) * s / 400.0;
      double x1 = (b - a[0] * x0) / a[1];
      if (x1 < lb[1] - 1e-12 || x1 > ub[1] + 1e-12) continue;
      EXPECT_GE(separable_qp_value(c, q, m, {x0, x1}), vbest - 1e-6);
    }
  }
}

TEST(KnapsackQp, DetectsEmptyFeasibleSet) {
  EXPECT_FALSE(knapsack_qp_oracle({0}, {1}, {0}, {1}, 5.0, {0}, {1}).has_value());
  EXPECT_TRUE(knapsack_qp_oracle({0}, {1}, {0}, {1}, 0.5, {0}, {1}).has_value());
}

TEST(Fixtures, LoadAndCount) {
  auto fixtures = load_lp_fixtures(src_path("tests/fixtures/lp_fixtures.txt"));
  ASSERT_GT(fixtures.size(), 300u);
  int n_opt = 0, n_inf = 0, n_unb = 0, n_milp = 0, n_child = 0;
  for (const auto& f : fixtures) {
    ASSERT_EQ(f.problem.lb.size(), f.problem.c.size()) << f.name;
    ASSERT_EQ(f.problem.ub.size(), f.problem.c.size()) << f.name;
    for (const auto& row : f.problem.rows)
      for (auto [j, v] : row.coef) ASSERT_LT(j, f.problem.num_vars()) << f.name;
    if (f.expect == "optimal") ++n_opt;
    if (f.expect == "infeasible") ++n_inf;
    if (f.expect == "unbounded") ++n_unb;
    if (!f.ints.empty()) ++n_milp;
    if (!f.parent.empty()) ++n_child;
  }
  EXPECT_GT(n_opt, 60);
  EXPECT_GT(n_inf, 100);
  EXPECT_GT(n_unb, 5);
  EXPECT_GT(n_milp, 25);
  EXPECT_GE(n_child, 10);
  // Spot-check one hand-verified entry: both gating units commit, demand 6
  // splits 4 + 2, objective 34.
  bool found = false;
  for (const auto& f : fixtures)
    if (f.name == "edge_milp_gating") {
      found = true;
      EXPECT_EQ(f.expect, "optimal");
      EXPECT_NEAR(f.objective, 34.0, 1e-9);
      EXPECT_EQ(f.ints, (std::vector<int>{2, 3}));
    }
  EXPECT_TRUE(found);
}
