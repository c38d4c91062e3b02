#pragma once

// Free two-step nilpotent Lie group N_v in exponential coordinates.
//
// A point is exp(X + A) with X in the first layer V = R^v (basis X_1..X_v)
// and A in the centre Z = R^z (basis X_{i,j} = [X_i, X_j], i < j, ordered
// lexicographically). The group law is the two-step Baker-Campbell-Hausdorff
// formula exp(X+A) exp(X'+A') = exp(X+X' + A+A' + [X,X']/2).

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace koranyi {

struct Dimensions {
  int v = 2;       // number of generators
  int vprime = 1;  // floor(v/2)
  int z = 1;       // v(v-1)/2
  int Q = 4;       // homogeneous dimension v + 2z = v^2
  int topdim = 3;  // v + z

  static Dimensions of(int v);

  bool operator==(const Dimensions&) const = default;
  bool odd() const { return v % 2 == 1; }
};

// Position of the coordinate X_{i,j} (0-based, i < j) in the centre vector.
inline std::size_t pair_index(int v, int i, int j) {
  return static_cast<std::size_t>(i * v - i * (i + 1) / 2 + (j - i - 1));
}

class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(Dimensions dims);
  GroupElement(Dimensions dims, std::vector<double> x, std::vector<double> a);

  static GroupElement identity(Dimensions dims) { return GroupElement(dims); }

  const Dimensions& dims() const { return dims_; }
  std::span<const double> x() const { return x_; }
  std::span<const double> a() const { return a_; }
  std::span<double> x() { return x_; }
  std::span<double> a() { return a_; }

  double x_norm() const;
  double a_norm() const;

  GroupElement inverse() const;

 private:
  Dimensions dims_{};
  std::vector<double> x_;
  std::vector<double> a_;
};

// Elements of the Lie algebra share the coordinate layout of the group.
using AlgebraElement = GroupElement;

// Centre coordinates of [X, X'].
std::vector<double> bracket(std::span<const double> x, std::span<const double> xp, Dimensions dims);

GroupElement multiply(const GroupElement& n, const GroupElement& m);

// r.exp(X + A) = exp(rX + r^2 A); throws std::domain_error for r <= 0.
GroupElement dilate(double r, const GroupElement& n);

// (|X|^4 + |A|^2)^(1/4), |A| the Euclidean norm of the centre coordinates.
double koranyi_norm(const GroupElement& n);

// Dense row-major square matrix, used for O(v) and skew-symmetric matrices.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}
  static Matrix identity(int n);

  int size() const { return n_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<const double> data() const { return data_; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& o) const;
  std::vector<double> apply(std::span<const double> x) const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

// Identification of Z with skew-symmetric v x v matrices:
// M_{ij} = a_{(i,j)}, M_{ji} = -a_{(i,j)}, so |M|_F = sqrt(2) |a|.
Matrix to_skew(std::span<const double> a, Dimensions dims);
std::vector<double> from_skew(const Matrix& m, Dimensions dims);

// max |k^T k - I| entrywise.
double orthogonality_defect(const Matrix& k);

// k.exp(X + A) = exp(kX + k A k^T); throws std::invalid_argument when k is
// not orthogonal to 1e-10.
GroupElement orthogonal_act(const Matrix& k, const GroupElement& n);

// Haar-distributed element of O(v): QR of a Gaussian matrix with the
// diagonal of R made positive.
Matrix haar_orthogonal_sample(int v, std::mt19937_64& rng);
Matrix haar_orthogonal_sample(int v, std::uint64_t seed);

// Standard normal coordinates, handy for property tests and Monte-Carlo.
GroupElement random_element(Dimensions dims, std::mt19937_64& rng, double scale = 1.0);

}  // namespace koranyi
