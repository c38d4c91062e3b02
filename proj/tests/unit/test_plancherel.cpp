#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "koranyi/plancherel.hpp"

using namespace koranyi;

TEST(Eta, Examples) {
  EXPECT_DOUBLE_EQ(eta_density({2.0}, 2), 2.0);
  EXPECT_DOUBLE_EQ(eta_density({2.0}, 3), 8.0);
  EXPECT_DOUBLE_EQ(eta_density({2.0, 1.0}, 4), 2.0 * 1.0 * 9.0);
  EXPECT_DOUBLE_EQ(eta_density({1.0, 1.0}, 4), 0.0);
  EXPECT_THROW(eta_density({1.0}, 4), std::invalid_argument);
  EXPECT_THROW(eta_density({-1.0}, 2), std::invalid_argument);
}

TEST(MatrixElement, GaussianClosedFormOnN2) {
  const auto f = gaussian_profile(0.8, 1.3);
  for (double lam : {0.3, 1.0, 4.0})
    for (int l : {0, 1, 6}) {
      const auto p = SphericalParam::make(Dimensions::of(2), 0, {lam}, {l});
      const double num = radial_matrix_element(f, p).real();
      const double ref = gaussian_matrix_element_v2(0.8, 1.3, lam, l);
      EXPECT_NEAR(num, ref, 1e-10 * std::max(1.0, std::abs(ref))) << lam << " " << l;
    }
}

TEST(MatrixElement, StableInResolutionOnN4) {
  const auto f = gaussian_profile(1.0, 1.0);
  const auto p = SphericalParam::make(Dimensions::of(4), 0, {1.5, 0.5}, {1, 0});
  MatrixElementSpec coarse, fine;
  fine.rho_points = 24;
  fine.a_points = 24;
  fine.sphere_k = 16;
  const auto a = radial_matrix_element(f, p, coarse), b = radial_matrix_element(f, p, fine);
  EXPECT_NEAR(std::abs(a - b), 0.0, 1e-9 * std::abs(b));
}

TEST(Plancherel, SelfConsistencyOnN2) {
  const std::vector<RadialProfile> prof{gaussian_profile(1.0, 1.0), gaussian_profile(0.5, 2.0),
                                        gaussian_profile(2.0, 0.7, 0.5)};
  const auto rep = plancherel_check_v2(prof, 40.0, 200);
  EXPECT_FALSE(rep.aborted) << rep.message;
  for (const auto& r : rep.profiles) EXPECT_LT(r.rel_err, 0.02) << r.name;
  // with the l-tail added back the constant is 1 / (2 pi^2)
  const auto& f0 = rep.profiles.front();
  const double completed = f0.lhs / (f0.rhs / (1.0 - f0.l_tail));
  EXPECT_NEAR(completed * 2 * std::numbers::pi * std::numbers::pi, 1.0, 2e-3);
}

TEST(Plancherel, RejectsEmpty) { EXPECT_THROW(plancherel_check_v2({}, 10.0, 10), std::invalid_argument); }

TEST(Plancherel, LambdaTailResolvedAtLargeLambda) {
  // the a-transform of a Gaussian is negligible on [lambda_max, 2 lambda_max]
  const auto rep = plancherel_check_v2({gaussian_profile(2.0, 0.7, 0.5)}, 40.0, 20);
  EXPECT_LT(rep.profiles.front().lambda_tail, 1e-12);
}
