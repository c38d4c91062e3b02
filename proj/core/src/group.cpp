#include "koranyi/group.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace koranyi {

namespace {

void require_same(const Dimensions& a, const Dimensions& b) {
  if (!(a == b)) throw std::invalid_argument("dimension mismatch between group elements");
}

double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

}  // namespace

Dimensions Dimensions::of(int v) {
  if (v < 2) throw std::invalid_argument("v must be >= 2, got " + std::to_string(v));
  Dimensions d;
  d.v = v;
  d.vprime = v / 2;
  d.z = v * (v - 1) / 2;
  d.Q = v + 2 * d.z;
  d.topdim = v + d.z;
  return d;
}

GroupElement::GroupElement(Dimensions dims)
    : dims_(dims), x_(static_cast<std::size_t>(dims.v), 0.0), a_(static_cast<std::size_t>(dims.z), 0.0) {}

GroupElement::GroupElement(Dimensions dims, std::vector<double> x, std::vector<double> a)
    : dims_(dims), x_(std::move(x)), a_(std::move(a)) {
  if (x_.size() != static_cast<std::size_t>(dims_.v) || a_.size() != static_cast<std::size_t>(dims_.z))
    throw std::invalid_argument("coordinate vectors do not match dimensions");
  for (double c : x_)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
  for (double c : a_)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
}

double GroupElement::x_norm() const { return std::sqrt(sq_norm(x_)); }
double GroupElement::a_norm() const { return std::sqrt(sq_norm(a_)); }

GroupElement GroupElement::inverse() const {
  GroupElement r(*this);
  for (double& c : r.x_) c = -c;
  for (double& c : r.a_) c = -c;
  return r;
}

std::vector<double> bracket(std::span<const double> x, std::span<const double> xp, Dimensions dims) {
  if (x.size() != static_cast<std::size_t>(dims.v) || xp.size() != static_cast<std::size_t>(dims.v))
    throw std::invalid_argument("bracket: vectors must have length v");
  std::vector<double> out(static_cast<std::size_t>(dims.z));
  std::size_t k = 0;
  for (int i = 0; i < dims.v; ++i)
    for (int j = i + 1; j < dims.v; ++j) out[k++] = x[i] * xp[j] - x[j] * xp[i];
  return out;
}

GroupElement multiply(const GroupElement& n, const GroupElement& m) {
  require_same(n.dims(), m.dims());
  const auto dims = n.dims();
  auto br = bracket(n.x(), m.x(), dims);
  std::vector<double> x(static_cast<std::size_t>(dims.v));
  std::vector<double> a(static_cast<std::size_t>(dims.z));
  for (int i = 0; i < dims.v; ++i) x[i] = n.x()[i] + m.x()[i];
  for (int k = 0; k < dims.z; ++k) a[k] = n.a()[k] + m.a()[k] + 0.5 * br[k];
  return GroupElement(dims, std::move(x), std::move(a));
}

GroupElement dilate(double r, const GroupElement& n) {
  if (!(r > 0.0)) throw std::domain_error("dilation factor must be positive");
  GroupElement out(n);
  for (double& c : out.x()) c *= r;
  for (double& c : out.a()) c *= r * r;
  return out;
}

double koranyi_norm(const GroupElement& n) {
  const double x2 = sq_norm(n.x());
  const double a2 = sq_norm(n.a());
  return std::pow(x2 * x2 + a2, 0.25);
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (o.n_ != n_) throw std::invalid_argument("matrix size mismatch");
  Matrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("matrix/vector size mismatch");
  std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix to_skew(std::span<const double> a, Dimensions dims) {
  if (a.size() != static_cast<std::size_t>(dims.z)) throw std::invalid_argument("to_skew: length must be z");
  Matrix m(dims.v);
  std::size_t k = 0;
  for (int i = 0; i < dims.v; ++i)
    for (int j = i + 1; j < dims.v; ++j) {
      m(i, j) = a[k];
      m(j, i) = -a[k];
      ++k;
    }
  return m;
}

std::vector<double> from_skew(const Matrix& m, Dimensions dims) {
  if (m.size() != dims.v) throw std::invalid_argument("from_skew: matrix must be v x v");
  std::vector<double> a(static_cast<std::size_t>(dims.z));
  std::size_t k = 0;
  for (int i = 0; i < dims.v; ++i)
    for (int j = i + 1; j < dims.v; ++j) a[k++] = 0.5 * (m(i, j) - m(j, i));
  return a;
}

double orthogonality_defect(const Matrix& k) {
  const Matrix p = k.transpose() * k;
  double worst = 0.0;
  for (int i = 0; i < k.size(); ++i)
    for (int j = 0; j < k.size(); ++j) worst = std::max(worst, std::abs(p(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

GroupElement orthogonal_act(const Matrix& k, const GroupElement& n) {
  const auto dims = n.dims();
  if (k.size() != dims.v) throw std::invalid_argument("orthogonal_act: matrix must be v x v");
  if (orthogonality_defect(k) > 1e-10) throw std::invalid_argument("orthogonal_act: matrix is not orthogonal");
  auto x = k.apply(n.x());
  const Matrix conj = k * to_skew(n.a(), dims) * k.transpose();
  return GroupElement(dims, std::move(x), from_skew(conj, dims));
}

Matrix haar_orthogonal_sample(int v, std::mt19937_64& rng) {
  if (v < 1) throw std::invalid_argument("haar_orthogonal_sample: v must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  // Columns of a Gaussian matrix, orthonormalised by modified Gram-Schmidt.
  // This equals Q from QR with diag(R) > 0, which is Haar on O(v).
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(v), std::vector<double>(static_cast<std::size_t>(v)));
  for (auto& c : cols)
    for (auto& e : c) e = normal(rng);
  for (int j = 0; j < v; ++j) {
    auto& cj = cols[j];
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) {
        double d = 0.0;
        for (int r = 0; r < v; ++r) d += cols[i][r] * cj[r];
        for (int r = 0; r < v; ++r) cj[r] -= d * cols[i][r];
      }
    const double nrm = std::sqrt(sq_norm(cj));
    for (auto& e : cj) e /= nrm;
  }
  Matrix k(v);
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < v; ++j) k(i, j) = cols[j][i];
  return k;
}

Matrix haar_orthogonal_sample(int v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_orthogonal_sample(v, rng);
}

GroupElement random_element(Dimensions dims, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> x(static_cast<std::size_t>(dims.v)), a(static_cast<std::size_t>(dims.z));
  for (auto& c : x) c = normal(rng);
  for (auto& c : a) c = normal(rng);
  return GroupElement(dims, std::move(x), std::move(a));
}

}  // namespace koranyi
