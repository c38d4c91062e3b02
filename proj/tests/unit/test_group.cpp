#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "koranyi/group.hpp"

using namespace koranyi;

namespace {

double dist(const GroupElement& a, const GroupElement& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.x().size(); ++i) d = std::max(d, std::abs(a.x()[i] - b.x()[i]));
  for (std::size_t i = 0; i < a.a().size(); ++i) d = std::max(d, std::abs(a.a()[i] - b.a()[i]));
  return d;
}

}  // namespace

TEST(Dimensions, Counts) {
  for (int v = 2; v <= 8; ++v) {
    const auto d = Dimensions::of(v);
    EXPECT_EQ(d.z, v * (v - 1) / 2);
    EXPECT_EQ(d.Q, v * v);
    EXPECT_EQ(d.vprime, v / 2);
    EXPECT_EQ(d.topdim, d.v + d.z);
  }
  EXPECT_THROW(Dimensions::of(1), std::invalid_argument);
}

TEST(Group, PairIndexIsLexicographic) {
  const int v = 5;
  std::size_t k = 0;
  for (int i = 0; i < v; ++i)
    for (int j = i + 1; j < v; ++j) EXPECT_EQ(pair_index(v, i, j), k++);
}

TEST(Group, BracketOnN2) {
  const auto d = Dimensions::of(2);
  const std::vector<double> x{1, 0}, y{0, 1};
  EXPECT_DOUBLE_EQ(bracket(x, y, d)[0], 1.0);
  EXPECT_DOUBLE_EQ(bracket(y, x, d)[0], -1.0);
}

TEST(Group, HeisenbergProduct) {
  // exp(X1) exp(X2) = exp(X1 + X2 + X12/2)
  const auto d = Dimensions::of(2);
  const auto p = multiply(GroupElement(d, {1, 0}, {0}), GroupElement(d, {0, 1}, {0}));
  EXPECT_DOUBLE_EQ(p.a()[0], 0.5);
}

TEST(Group, AssociativityAndInverse) {
  std::mt19937_64 rng(11);
  for (int v : {2, 3, 4, 5}) {
    const auto d = Dimensions::of(v);
    for (int t = 0; t < 200; ++t) {
      const auto a = random_element(d, rng), b = random_element(d, rng), c = random_element(d, rng);
      EXPECT_LT(dist(multiply(multiply(a, b), c), multiply(a, multiply(b, c))), 1e-12);
      EXPECT_LT(dist(multiply(a, a.inverse()), GroupElement::identity(d)), 1e-12);
    }
  }
}

TEST(Group, DilationIsAutomorphismAndNormHomogeneous) {
  std::mt19937_64 rng(3);
  for (int v : {2, 4, 5}) {
    const auto d = Dimensions::of(v);
    for (int t = 0; t < 100; ++t) {
      const auto a = random_element(d, rng), b = random_element(d, rng);
      const double r = 0.1 + 3.0 * std::uniform_real_distribution<double>()(rng);
      EXPECT_LT(dist(dilate(r, multiply(a, b)), multiply(dilate(r, a), dilate(r, b))), 1e-11);
      EXPECT_NEAR(koranyi_norm(dilate(r, a)), r * koranyi_norm(a), 1e-12 * r * koranyi_norm(a));
    }
  }
  EXPECT_THROW(dilate(0.0, GroupElement::identity(Dimensions::of(3))), std::domain_error);
}

TEST(Group, NormExamples) {
  const auto d = Dimensions::of(2);
  EXPECT_DOUBLE_EQ(koranyi_norm(GroupElement(d, {1, 0}, {0})), 1.0);
  EXPECT_DOUBLE_EQ(koranyi_norm(GroupElement(d, {0, 0}, {4})), 2.0);
  EXPECT_NEAR(koranyi_norm(GroupElement(d, {1, 1}, {2})), std::pow(8.0, 0.25), 1e-15);
  const auto n = GroupElement(d, {0.3, -1.2}, {0.7});
  EXPECT_DOUBLE_EQ(koranyi_norm(n), koranyi_norm(n.inverse()));
}

TEST(Group, SkewRoundTrip) {
  std::mt19937_64 rng(5);
  const auto d = Dimensions::of(5);
  const auto n = random_element(d, rng);
  const auto m = to_skew(n.a(), d);
  const auto back = from_skew(m, d);
  for (int k = 0; k < d.z; ++k) EXPECT_DOUBLE_EQ(back[k], n.a()[k]);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(m(i, i), 0.0);
}

TEST(Group, OrthogonalInvariance) {
  std::mt19937_64 rng(17);
  for (int v : {2, 3, 4, 5, 6}) {
    const auto d = Dimensions::of(v);
    for (int t = 0; t < 50; ++t) {
      const auto k = haar_orthogonal_sample(v, rng);
      EXPECT_LT(orthogonality_defect(k), 1e-12);
      const auto a = random_element(d, rng), b = random_element(d, rng);
      EXPECT_NEAR(koranyi_norm(orthogonal_act(k, a)), koranyi_norm(a), 1e-10);
      // k acts by automorphisms
      EXPECT_LT(dist(orthogonal_act(k, multiply(a, b)), multiply(orthogonal_act(k, a), orthogonal_act(k, b))), 1e-10);
    }
  }
}

TEST(Group, NonOrthogonalRejected) {
  Matrix m = Matrix::identity(3);
  m(0, 1) = 0.5;
  EXPECT_THROW(orthogonal_act(m, GroupElement::identity(Dimensions::of(3))), std::invalid_argument);
}

TEST(Group, HaarSamplerIsSeeded) {
  const auto a = haar_orthogonal_sample(4, std::uint64_t{9});
  const auto b = haar_orthogonal_sample(4, std::uint64_t{9});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(a(i, j), b(i, j));
}
