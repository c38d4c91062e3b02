#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "koranyi/maximal.hpp"

using namespace koranyi;
using std::numbers::pi;

namespace {

const Dimensions kD2 = Dimensions::of(2);

double gauss(double x1, double x2, double a) { return std::exp(-(x1 * x1 + x2 * x2) - 0.7 * a * a); }

double max_abs_diff(const GridField& a, const GridField& b, const Interior& in) {
  double m = 0.0;
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j)
      for (int k = 0; k < a.n(); ++k)
        if (in.contains(a, i, j, k)) m = std::max(m, std::abs(a.at(i, j, k) - b.at(i, j, k)));
  return m;
}

}  // namespace

TEST(MAlpha, Examples) {
  EXPECT_NEAR(m_alpha(0.5, 1.0).real(), 2.0, 1e-15);
  EXPECT_EQ(m_alpha(1.5, 1.0), std::complex<double>(0.0));
  EXPECT_NEAR(m_alpha(0.6, 2.0).real(), 1.28, 1e-14);
  bool pole = false;
  EXPECT_EQ(m_alpha(0.3, -2.0, &pole), std::complex<double>(0.0));
  EXPECT_TRUE(pole);
  EXPECT_THROW(m_alpha(-0.1, 1.0), std::domain_error);
}

TEST(Grid, LayoutAndInterpolation) {
  const auto g = GridField::from_function(16, 2.0, [](double x1, double x2, double a) { return 1 + x1 - 2 * x2 + 3 * a; });
  EXPECT_DOUBLE_EQ(g.spacing(), 0.25);
  EXPECT_DOUBLE_EQ(g.coord(0), -1.875);
  // trilinear is exact on affine functions inside the node hull
  EXPECT_NEAR(g.sample(0.1, -0.33, 0.71), 1 + 0.1 + 0.66 + 2.13, 1e-13);
  EXPECT_NEAR(g.sample_cubic(0.1, -0.33, 0.71), 1 + 0.1 + 0.66 + 2.13, 1e-13);
  EXPECT_EQ(g.sample(5.0, 0.0, 0.0), 0.0);
  EXPECT_THROW(GridField(1, 1.0), std::invalid_argument);
}

TEST(Grid, MarginViolation) {
  const GridField g(32, 2.0, 1.0);
  const auto rule = grid_sphere_rule(6, 12);
  EXPECT_THROW(spherical_average(g, 1.5, rule, Interior{1.0}), MarginError);
  EXPECT_THROW(standard_maximal(g, RadiiLadder(0.5, 1.25, 6), Interior{1.0}), MarginError);
}

TEST(SphericalAverage, ConstantAndSmallRadius) {
  const GridField one(32, 4.0, 1.0);
  const auto rule = grid_sphere_rule(8, 16);
  const Interior in{1.5};
  const auto s = spherical_average(one, 0.9, rule, in);
  EXPECT_LT(max_abs_diff(s, GridField(32, 4.0, rule.total_mass), in), 1e-12);
  EXPECT_NEAR(rule.total_mass, pi / 2, 1e-4);
  const auto g = GridField::from_function(32, 4.0, gauss);
  const auto z = spherical_average(g, 0.0, rule, in);
  EXPECT_NEAR(z.at(16, 16, 16), rule.total_mass * g.at(16, 16, 16), 1e-12);
}

TEST(SphericalAverage, OffGridOracle) {
  const auto fine = grid_sphere_rule(24, 48);
  const auto rule = grid_sphere_rule(12, 24);
  const GroupElement n(kD2, {0.3, -0.2}, {0.25});
  const double t = 0.8;
  const auto sp = materialize(fine);
  double direct = 0.0;
  for (std::size_t p = 0; p < sp.size(); ++p) {
    const double m1 = t * sp.xs[2 * p], m2 = t * sp.xs[2 * p + 1], ma = t * t * sp.as[p];
    direct += sp.w[p] * gauss(0.3 - m1, -0.2 - m2, 0.25 - ma - 0.5 * (0.3 * m2 + 0.2 * m1));
  }
  const auto g = GridField::from_function(128, 3.0, gauss);
  EXPECT_NEAR(sphere_conv_at(g, n, t, rule) / direct, 1.0, 1e-3);
  const auto c = GridField::from_function(64, 3.0, gauss);
  EXPECT_NEAR(sphere_conv_at(c, n, t, rule, Interp::cubic) / direct, 1.0, 1e-4);
}

TEST(Maximal, ConstantsAndHomogeneity) {
  const GridField one(24, 4.0, 1.0);
  const auto rule = grid_sphere_rule(6, 12);
  const Interior in{1.2};
  const RadiiLadder lad(0.2, 1.25, 6);
  EXPECT_LT(max_abs_diff(standard_maximal(one, lad, in), one, in), 1e-13);
  EXPECT_LT(max_abs_diff(spherical_maximal(one, lad, rule, in), one, in), 1e-13);

  const auto f = random_bumps(24, 4.0, 3, 1.2, 5, true);
  const auto g = random_bumps(24, 4.0, 3, 1.2, 6, true);
  GridField fg = f, cf = f;
  for (std::size_t i = 0; i < fg.values().size(); ++i) {
    fg.values()[i] += g.values()[i];
    cf.values()[i] *= -2.5;
  }
  const auto Af = spherical_maximal(f, lad, rule, in), Ag = spherical_maximal(g, lad, rule, in);
  const auto Afg = spherical_maximal(fg, lad, rule, in);
  for (std::size_t i = 0; i < Af.values().size(); ++i) EXPECT_LE(Afg.values()[i], Af.values()[i] + Ag.values()[i] + 1e-12);
  const auto Mf = standard_maximal(f, lad, in), Mcf = standard_maximal(cf, lad, in);
  for (std::size_t i = 0; i < Mf.values().size(); ++i) EXPECT_NEAR(Mcf.values()[i], 2.5 * Mf.values()[i], 1e-12);
  // bounded by sup |f|
  double sup = 0.0;
  for (double x : f.values()) sup = std::max(sup, std::abs(x));
  for (double x : Af.values()) EXPECT_LE(x, sup * (1 + 1e-12));
}

TEST(Maximal, BallIndicatorAtCentre) {
  const double r0 = 0.8;
  const auto ind = GridField::from_function(64, 2.5, [&](double x1, double x2, double a) {
    const double q = x1 * x1 + x2 * x2;
    return q * q + a * a < std::pow(r0, 4) ? 1.0 : 0.0;
  });
  const Interior in{0.05};
  const auto M = standard_maximal(ind, RadiiLadder(r0 / 4, 2.0, 2), in);
  EXPECT_NEAR(M.at(32, 32, 32), 1.0, 0.05);
}

TEST(Maximal, DilationCovariance) {
  const auto rule = grid_sphere_rule(8, 16);
  const double rho = 2.0;
  const auto f = GridField::from_function(64, 4.0, gauss);
  const auto fd = GridField::from_function(64, 4.0, [&](double x1, double x2, double a) {
    return gauss(rho * x1, rho * x2, rho * rho * a);
  });
  const RadiiLadder lad(0.3, 1.25, 4);
  const auto A = spherical_maximal(f, lad, rule, Interior{1.0});
  const auto Ad = spherical_maximal(fd, lad.scaled(1.0 / rho), rule, Interior{0.25});
  for (int i : {30, 31, 33})
    for (int k : {30, 32, 33}) {
      const double x1 = Ad.coord(i), a = Ad.coord(k);
      EXPECT_NEAR(Ad.at(i, 32, k), A.sample(rho * x1, rho * Ad.coord(32), rho * rho * a), 2e-2);
    }
}

TEST(SquareFunction, ConstantAndHomogeneity) {
  const auto rule = grid_sphere_rule(6, 12);
  const Interior in{1.0};
  std::vector<double> s;
  for (int i = 0; i <= 10; ++i) s.push_back(0.1 * i);
  const auto z = grid_square_function_s1(GridField(24, 4.0, 3.0), s, rule, in);
  for (double x : z.values()) EXPECT_LT(std::abs(x), 1e-10);
  const auto f = random_bumps(24, 4.0, 3, 1.0, 2);
  GridField f2 = f;
  for (double& x : f2.values()) x *= 2;
  const auto a = grid_square_function_s1(f, s, rule, in), b = grid_square_function_s1(f2, s, rule, in);
  for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_NEAR(b.values()[i], 2 * a.values()[i], 1e-12);
  EXPECT_THROW(grid_square_function_s1(f, {0.0, 0.2, 0.1}, rule, in), std::invalid_argument);
}

TEST(SquareFunction, OffGridOracle) {
  const auto rule = grid_sphere_rule(12, 24);
  const auto g = GridField::from_function(96, 3.0, gauss);
  std::vector<double> s;
  for (int i = 0; i <= 40; ++i) s.push_back(0.025 * i);
  const Interior in{0.0};
  const auto S = grid_square_function_s1(g, s, rule, Interior{0.04});
  // at the origin, by quadrature in s of the off-grid derivative
  const GroupElement o(kD2, {0, 0}, {0});
  const double h = 1e-3;
  double acc = 0.0;
  const Rule1D rr = composite_gauss_legendre(10, 4, 0.0, 1.0);
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const double r = rr.nodes[i];
    const double d = (sphere_conv_at(g, o, r + h, rule, Interp::cubic) - sphere_conv_at(g, o, r - h, rule, Interp::cubic)) / (2 * h);
    acc += rr.weights[i] * d * d * r;
  }
  const int c = 48;  // nodes 47 and 48 straddle 0; use the mean of the two along each axis
  double grid_val = 0.0;
  for (int di : {-1, 0})
    for (int dj : {-1, 0})
      for (int dk : {-1, 0}) grid_val += S.at(c + di, c + dj, c + dk) / 8;
  EXPECT_NEAR(grid_val / std::sqrt(acc), 1.0, 0.05);
  (void)in;
}

TEST(PointwiseBound, TrivialFields) {
  const auto rule = grid_sphere_rule(6, 12);
  const RadiiLadder lad(0.25, 1.25, 6);
  const auto z = pointwise_bound_check(GridField(24, 4.0, 0.0), lad, 10, rule, Interior{1.0});
  EXPECT_EQ(z.fraction, 1.0);
  const auto one = pointwise_bound_check(GridField(24, 4.0, 1.0), lad, 10, rule, Interior{1.0});
  EXPECT_EQ(one.fraction, 1.0);
  EXPECT_NEAR(one.worst_ratio, 1.0, 1e-10);
}

TEST(PointwiseBound, RandomBumps) {
  const auto rule = grid_sphere_rule(6, 12);
  const auto f = random_bumps(32, 4.0, 3, 1.2, 21);
  const auto rep = pointwise_bound_check(f, RadiiLadder(1.0 / std::pow(1.25, 8), 1.25, 8), 20, rule, Interior{1.2});
  EXPECT_GE(rep.fraction, 0.99);
}

TEST(Kernels, MassAndMonotonicity) {
  const double mu = sphere_mass(kD2);
  for (const auto& k : {ball_kernel(), bump_kernel(), mollifier_kernel()}) EXPECT_NEAR(k.l1_norm(mu), 1.0, 1e-3) << k.name;
  const GridField one(32, 4.0, 1.0);
  const auto c = conv_radial_kernel(one, bump_kernel(), 0.6, Interior{1.0});
  EXPECT_NEAR(c.at(16, 16, 16), 1.0, 0.02);
  RadialKernel bad{"bad", [](double rho) { return rho < 1 ? rho : 0.0; }, 1.0};
  EXPECT_THROW(decreasing_kernel_maximal_check(bad, one, RadiiLadder(0.2, 1.25, 2), Interior{1.0}), std::invalid_argument);
}

TEST(Kernels, MollifiedDiracIsApproximateIdentity) {
  const auto g = GridField::from_function(48, 3.0, gauss);
  const auto c = conv_radial_kernel(g, mollifier_kernel(), 0.05, Interior{0.5});
  // |c - f| <= spacing * |grad f|
  EXPECT_LT(max_abs_diff(c, g, Interior{0.5}), g.spacing() * 1.5);
}

TEST(Kernels, LeftInvariance) {
  const GroupElement n0(kD2, {0.25, -0.5}, {0.3});
  const auto f = GridField::from_function(96, 4.0, gauss);
  const auto fs = GridField::from_function(96, 4.0, [&](double x1, double x2, double a) {
    // f(n0^{-1} n)
    const double y1 = x1 - 0.25, y2 = x2 + 0.5;
    const double ya = a - 0.3 - 0.5 * (0.25 * x2 + 0.5 * x1);
    return gauss(y1, y2, ya);
  });
  const auto c = conv_radial_kernel(f, bump_kernel(), 0.5, Interior{1.5});
  const auto cs = conv_radial_kernel(fs, bump_kernel(), 0.5, Interior{0.6});
  for (int i : {42, 48, 52})
    for (int k : {45, 50}) {
      const double x1 = cs.coord(i), x2 = cs.coord(47), a = cs.coord(k);
      const double y1 = x1 - 0.25, y2 = x2 + 0.5, ya = a - 0.3 - 0.5 * (0.25 * x2 + 0.5 * x1);
      EXPECT_NEAR(cs.at(i, 47, k), c.sample(y1, y2, ya), 1e-3);
    }
}

TEST(DecreasingKernel, DominationOnBumps) {
  const auto f = random_bumps(32, 4.0, 3, 1.2, 3, true);
  const auto rep = decreasing_kernel_maximal_check(bump_kernel(), f, RadiiLadder(0.25, 1.25, 5), Interior{1.2});
  EXPECT_GE(rep.fraction, 0.99);
}

TEST(AnalyticFamily, ZeroFieldAndDomains) {
  const auto rule = grid_sphere_rule(6, 12);
  const GridField z(32, 4.0, 0.0);
  const GroupElement o(kD2, {0, 0}, {0});
  EXPECT_EQ(a_alpha_at(z, o, 1.0, rule), std::complex<double>(0.0));
  EXPECT_EQ(b_hj_at(z, o, 1.0, 1, 1, rule), std::complex<double>(0.0));
  EXPECT_THROW(a_alpha_at(z, o, -0.5, rule), std::domain_error);
  EXPECT_THROW(b_hj_at(z, o, 1.0, 2, 0, rule), std::invalid_argument);
}

TEST(AnalyticFamily, IntegrationByPartsIdentity) {
  const auto rule = grid_sphere_rule(8, 16);
  const auto g = GridField::from_function(64, 4.0, gauss);
  const std::vector<GroupElement> pts{GroupElement(kD2, {0.3, -0.2}, {0.25}), GroupElement(kD2, {0, 0}, {0})};
  const auto rep = analytic_family_check(g, pts, rule);
  EXPECT_LT(rep.max_rel_corrected, 1e-4);
  EXPECT_GT(rep.max_rel_stated, 0.5);
  EXPECT_LT(rep.limit_rel_corrected.back(), 1e-3);
}

TEST(AnalyticFamily, KernelDomination) {
  const auto rule = grid_sphere_rule(8, 16);
  const auto g = random_bumps(48, 4.0, 3, 1.0, 4, true);
  const std::vector<GroupElement> pts{GroupElement(kD2, {0.3, -0.2}, {0.25}), GroupElement(kD2, {-0.4, 0.1}, {0.0})};
  const auto rep = kernel_domination_check(1.0, 5.0, g, pts, rule);
  EXPECT_TRUE(rep.ok);
  EXPECT_LT(rep.observed_c, 1.0);
  const auto pos = kernel_domination_check(1.0, 0.0, g.abs(), pts, rule);
  EXPECT_NEAR(pos.max_ratio, 1.0, 1e-12);
}
