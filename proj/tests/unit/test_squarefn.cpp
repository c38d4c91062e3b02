#include <gtest/gtest.h>

#include <cmath>

#include "koranyi/squarefn.hpp"

using namespace koranyi;

TEST(Chain, FrozenCoefficients) {
  EXPECT_EQ(chain_coeff(1, 0), 2);
  EXPECT_EQ(chain_coeff(2, 0), 2);
  EXPECT_EQ(chain_coeff(2, 1), 4);
  EXPECT_EQ(chain_coeff(3, 0), 12);
  EXPECT_EQ(chain_coeff(3, 1), 8);
  EXPECT_EQ(chain_power(1, 3), 3);
  EXPECT_EQ(half_ceil(3), 2);
}

TEST(Chain, RuleForExponential) {
  // d^h/ds^h exp(s^2) against the coefficient table
  const double s = 0.7, e = std::exp(s * s);
  const double exact[4] = {e, 2 * s * e, (2 + 4 * s * s) * e, (12 * s + 8 * s * s * s) * e};
  for (int h = 1; h <= 3; ++h) {
    double sum = 0.0;
    for (int j = 0; j <= h / 2; ++j) sum += chain_coeff(h, j) * std::pow(s, chain_power(j, h)) * e;
    EXPECT_NEAR(sum, exact[h], 1e-12);
  }
}

TEST(Reconstruction, MatchesFiniteDifferences) {
  const auto p = SphericalParam::make(Dimensions::of(4), 0, {1.3, 0.6}, {1, 2});
  for (int h : {1, 2}) {
    const auto rc = reconstruct_derivative(p, 0.9, h);
    const auto fd = pairing_derivative(p, 0.9, h, DerivMethod::finite_diff);
    EXPECT_LT(std::abs(rc - fd), 1e-6 * std::abs(fd)) << h;
  }
}

TEST(Reconstruction, IndexChecks) {
  const auto p = SphericalParam::make(Dimensions::of(4), 0, {1.3, 0.6}, {0, 0});
  EXPECT_THROW(eval_b_gj(p, 1.0, {2, 2}, {0, 0}, 3), std::invalid_argument);
}

TEST(Majorant, CheckBIsDominated) {
  const auto p = SphericalParam::make(Dimensions::of(4), 0, {1.3, 0.6}, {1, 1});
  const std::vector<double> ts{0.2, 0.5, 0.8, 0.95}, ss{0.3, 0.8, 1.5, 3.0, 6.0, 10.0};
  const auto rep = check_b_majorant(p, 1, 1, ts, ss);
  EXPECT_GT(rep.points, 0);
  EXPECT_TRUE(rep.ok) << rep.c_fit << " " << rep.c_validate;
}

TEST(Shat, FiniteWithControlledTails) {
  const auto p = SphericalParam::make(Dimensions::of(4), 0, {2.0, 1.0}, {0, 1});
  const auto r = shat(p, 1);
  EXPECT_TRUE(r.ok) << r.diagnostic;
  EXPECT_GT(r.value, 0.0);
  EXPECT_LT(r.tail_bound, 0.01 * r.integral);
}

TEST(Shat, ScaleInvariance) {
  const auto p = SphericalParam::make(Dimensions::of(4), 0, {2.0, 1.0}, {1, 0});
  const auto a = shat(p, 1), b = shat(p.scaled(3.0), 1);
  EXPECT_NEAR(b.value / a.value, 1.0, 1e-4);
}

TEST(Shat, RejectsBadOrder) {
  const auto p = SphericalParam::make(Dimensions::of(4), 0, {2.0, 1.0}, {0, 0});
  EXPECT_THROW(shat(p, 0), std::invalid_argument);
  EXPECT_THROW(shat(p, 4), std::invalid_argument);
}

TEST(Scan, DefaultGridShape) {
  const auto g = ScanGrid::default_grid(4);
  EXPECT_EQ(g.rung_params(0).size(), g.shapes.size() * g.l_values.size() * g.l_values.size());
  for (const auto& p : g.rung_params(2)) EXPECT_TRUE(p.in_parameter_set());
}

TEST(Scan, SmallPinnedScan) {
  ScanGrid g;
  g.v = 4;
  g.rungs = {1, 4};
  g.shapes = {{1, 0.5}};
  g.l_values = {0};
  g.mode = LadderMode::pinned;
  const auto rep = scan_shat(g, 1);
  ASSERT_EQ(rep.rung_sup.size(), 2u);
  EXPECT_TRUE(rep.all_ok);
  EXPECT_NEAR(rep.ratios[0], rep.rung_sup[1] / rep.rung_sup[0], 1e-15);
}

TEST(BesselMoment, ConvergentCaseStabilizes) {
  const double a = bessel_moment(2, 0, 1.0, 200) + bessel_moment_tail(2, 0, 1.0, 200);
  const double b = bessel_moment(2, 0, 1.0, 400) + bessel_moment_tail(2, 0, 1.0, 400);
  EXPECT_NEAR(a / b, 1.0, 1e-6);
}

TEST(BesselMoment, TailCompletionAtTheEdge) {
  const double a = bessel_moment(2, 0, 3.9, 200) + bessel_moment_tail(2, 0, 3.9, 200);
  const double b = bessel_moment(2, 0, 3.9, 400) + bessel_moment_tail(2, 0, 3.9, 400);
  EXPECT_NEAR(a / b, 1.0, 1e-4);
  // the raw truncated integral is still moving by several percent
  EXPECT_GT(bessel_moment(2, 0, 3.9, 400) / bessel_moment(2, 0, 3.9, 200), 1.05);
}

TEST(BesselMoment, DivergentCase) {
  EXPECT_TRUE(std::isinf(bessel_moment_tail(2, 0, 4.1, 100)));
  EXPECT_GT(bessel_moment(2, 0, 4.1, 800), 1.1 * bessel_moment(2, 0, 4.1, 400));
}
