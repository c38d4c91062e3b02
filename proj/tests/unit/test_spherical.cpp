#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "koranyi/quadrature.hpp"
#include "koranyi/special.hpp"
#include "koranyi/spherical.hpp"

using namespace koranyi;

namespace {

SphericalParam sample_param(int v) {
  const auto d = Dimensions::of(v);
  switch (v) {
    case 2: return SphericalParam::make(d, 0, {1.4}, {2});
    case 3: return SphericalParam::make(d, 0.9, {1.1}, {1});
    case 4: return SphericalParam::make(d, 0, {1.3, 0.6}, {1, 2});
    default: return SphericalParam::make(d, 0.8, {1.3, 0.6}, {1, 0});
  }
}

}  // namespace

TEST(Param, Validation) {
  const auto d4 = Dimensions::of(4);
  EXPECT_THROW(SphericalParam::make(d4, 0, {1.0}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(SphericalParam::make(d4, 1.0, {2.0, 1.0}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(SphericalParam::make(d4, 0, {2.0, -1.0}, {0, 0}), std::invalid_argument);
  EXPECT_TRUE(SphericalParam::make(d4, 0, {2.0, 1.0}, {0, 3}).in_parameter_set());
  EXPECT_FALSE(SphericalParam::make(d4, 0, {1.0, 1.0}, {0, 0}).in_parameter_set());
  EXPECT_FALSE(SphericalParam::make(Dimensions::of(5), 0, {2.0, 1.0}, {0, 0}).in_parameter_set());
}

TEST(Param, ScalingAndD2) {
  const auto p = sample_param(5);
  const auto q = p.scaled(3.0);
  EXPECT_DOUBLE_EQ(q.r, 3.0 * p.r);
  EXPECT_DOUBLE_EQ(q.lambda[1], 9.0 * p.lambda[1]);
  EXPECT_NEAR(p.d2_norm(), std::hypot(1.3, 0.6), 1e-15);
  const auto c = d2_coords(p);
  EXPECT_DOUBLE_EQ(c[pair_index(5, 0, 1)], 1.3);
  EXPECT_DOUBLE_EQ(c[pair_index(5, 2, 3)], 0.6);
}

TEST(Theta, IdentityAndModulus) {
  std::mt19937_64 rng(1);
  for (int v : {2, 3, 4, 5}) {
    const auto p = sample_param(v);
    EXPECT_NEAR(std::abs(theta_eval(p, GroupElement::identity(p.dims)) - 1.0), 0.0, 1e-15);
    for (int t = 0; t < 20; ++t) EXPECT_LE(std::abs(theta_eval(p, random_element(p.dims, rng))), 1.0 + 1e-12);
  }
}

TEST(Phi, MonteCarloIsReproducibleAndBounded) {
  const auto p = sample_param(4);
  std::mt19937_64 rng(2);
  const auto n = random_element(p.dims, rng, 0.7);
  const auto a = phi_eval(p, n, 400, 9), b = phi_eval(p, n, 400, 9);
  EXPECT_EQ(a.value, b.value);
  EXPECT_LE(std::abs(a.value), 1.0 + 4 * a.std_error);
  EXPECT_THROW(phi_eval(p, n, 10, 1), std::invalid_argument);
}

TEST(Pairing, SmallSGivesMass) {
  for (int v : {2, 3, 4, 5}) {
    const auto p = sample_param(v);
    EXPECT_NEAR(pairing_mu_s_phi(p, 1e-6).real(), sphere_mass(p.dims), 1e-9) << v;
  }
}

TEST(Pairing, FastRouteAgainstDirectRule) {
  for (int v : {2, 3, 4, 5}) {
    const auto p = sample_param(v);
    const auto d = p.dims;
    const SphereRule xs = v == 2 ? sphere_rule(2, 96, SphereRuleKind::exact) : product_sphere_rule(v, 16);
    for (double s : {0.5, 1.3}) {
      const auto fast = pairing_mu_s_phi(p, s);
      const auto direct = pairing_mu_s_phi(p, s, radial_nodes(d, 32, 2), xs);
      EXPECT_NEAR(std::abs(fast - direct), 0.0, 1e-9) << v << " " << s;
    }
  }
}

TEST(Pairing, ScaleCovariance) {
  // <mu_s, phi^{t r, t^2 Lambda, l}> = <mu_{ts}, phi^{r, Lambda, l}>
  for (int v : {4, 5}) {
    const auto p = sample_param(v);
    for (double t : {0.5, 3.0})
      EXPECT_NEAR(std::abs(pairing_mu_s_phi(p.scaled(t), 0.7) - pairing_mu_s_phi(p, 0.7 * t)), 0.0, 1e-11);
  }
}

TEST(Pairing, AnalyticDerivativesAgainstDifferences) {
  for (int v : {2, 4, 5}) {
    const auto p = sample_param(v);
    for (double s : {0.5, 2.0})
      for (int j = 1; j <= 3; ++j) {
        const auto an = pairing_derivative(p, s, j, DerivMethod::analytic);
        const auto fd = pairing_derivative(p, s, j, DerivMethod::finite_diff);
        EXPECT_LT(std::abs(an - fd), 1e-5 * std::max(1e-3, std::abs(an))) << v << " " << s << " " << j;
      }
  }
}

TEST(Pairing, PlanDerivsMatchPointwise) {
  const auto p = sample_param(4);
  const auto plan = make_pairing_plan(p, 1.0);
  const auto d = pairing_derivs(plan, 1.0, 3);
  EXPECT_NEAR(d[0], pairing_mu_s_phi(p, 1.0).real(), 1e-10);
  EXPECT_NEAR(d[2], pairing_derivative(p, 1.0, 2, DerivMethod::analytic).real(), 1e-10);
}
