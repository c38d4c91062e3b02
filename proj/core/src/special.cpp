#include "koranyi/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace koranyi {

namespace {

// Generalised Laguerre L_n^(a)(x) times exp(-x/2), three-term recurrence.
double scaled_laguerre(int n, int a, double x) {
  const double e = std::exp(-0.5 * x);
  if (n < 0) return 0.0;
  double prev = e;
  if (n == 0) return prev;
  double cur = (1.0 + a - x) * e;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double binomial(int m, int i) {
  double r = 1.0;
  for (int k = 1; k <= i; ++k) r = r * (m - i + k) / k;
  return r;
}

}  // namespace

double laguerre_fn(int n, double x) {
  if (n < 0) throw std::invalid_argument("laguerre_fn: degree must be nonnegative");
  if (!(x >= 0.0)) throw std::domain_error("laguerre_fn: x must be >= 0");
  return scaled_laguerre(n, 0, x);
}

double laguerre_fn_deriv(int n, double x, int m) {
  if (m == 0) return laguerre_fn(n, x);
  if (n < 0 || m < 0 || m > 8) throw std::invalid_argument("laguerre_fn_deriv: bad degree or order");
  if (!(x >= 0.0)) throw std::domain_error("laguerre_fn_deriv: x must be >= 0");
  // (L_n e^{-x/2})^(m) = sum_i C(m,i) (-1/2)^(m-i) L_n^(i) e^{-x/2},
  // with L_n^(i) = (-1)^i L_{n-i}^{(i)}.
  double s = 0.0;
  for (int i = 0; i <= m && i <= n; ++i) {
    const double d = ((i % 2) ? -1.0 : 1.0) * scaled_laguerre(n - i, i, x);
    s += binomial(m, i) * std::pow(-0.5, m - i) * d;
  }
  return s;
}

void laguerre_fn_derivs(int n, double x, int max_m, std::span<double> out) {
  if (n < 0 || max_m < 0 || max_m > 8) throw std::invalid_argument("laguerre_fn_derivs: bad degree or order");
  if (!(x >= 0.0)) throw std::domain_error("laguerre_fn_derivs: x must be >= 0");
  if (out.size() < static_cast<std::size_t>(max_m + 1)) throw std::invalid_argument("laguerre_fn_derivs: output too short");
  std::array<double, 9> d{};
  for (int i = 0; i <= max_m && i <= n; ++i) d[i] = ((i % 2) ? -1.0 : 1.0) * scaled_laguerre(n - i, i, x);
  for (int m = 0; m <= max_m; ++m) {
    double s = 0.0;
    double p = 1.0;  // (-1/2)^(m-i), built from i = m downwards
    for (int i = m; i >= 0; --i) {
      if (i <= n) s += binomial(m, i) * p * d[i];
      p *= -0.5;
    }
    out[m] = s;
  }
}

double hermite_weber(int l, double x) {
  if (l < 0) throw std::invalid_argument("hermite_weber: degree must be nonnegative");
  if (l > kMaxHermiteDegree) throw std::invalid_argument("hermite_weber: degree above supported range");
  double prev = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (l == 0) return prev;
  double cur = std::sqrt(2.0) * x * prev;
  for (int k = 1; k < l; ++k) {
    const double next = x * std::sqrt(2.0 / (k + 1.0)) * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::complex<double> log_gamma(std::complex<double> z) {
  using C = std::complex<double>;
  constexpr double pi = std::numbers::pi;
  if (z.real() <= 0.0 && z.imag() == 0.0 && z.real() == std::floor(z.real()))
    throw std::domain_error("log_gamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(C(pi, 0.0)) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  // Lanczos, g = 7, n = 9.
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const C w = z - 1.0;
  C sum = c[0];
  for (int i = 1; i < 9; ++i) sum += c[i] / (w + static_cast<double>(i));
  const C t = w + 7.5;
  return 0.5 * std::log(2.0 * pi) + (w + 0.5) * std::log(t) - t + std::log(sum);
}

std::complex<double> complex_gamma(double x, double y) {
  if (y == 0.0 && x <= 0.0 && x == std::floor(x)) throw std::domain_error("complex_gamma: pole");
  if (y == 0.0) return {std::tgamma(x), 0.0};
  return std::exp(log_gamma({x, y}));
}

double beta_fn(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw std::domain_error("beta_fn: arguments must be positive");
  return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

double gamma_ratio(double x, double y) {
  const double ay = std::abs(y);
  const double lg = log_gamma({x, y}).real();
  return std::exp(-0.5 * std::numbers::pi * ay + (x - 0.5) * std::log(ay) - lg);
}

GammaRatioReport gamma_ratio_estimate_check(double a, double b, double y_max, int nx, int ny) {
  if (!(a > 0.0) || b < a) throw std::invalid_argument("gamma_ratio_estimate_check: need 0 < a <= b");
  if (!(y_max > 1.0)) throw std::invalid_argument("gamma_ratio_estimate_check: y_max must exceed 1");
  if (nx < 1 || ny < 2) throw std::invalid_argument("gamma_ratio_estimate_check: degenerate grid");
  GammaRatioReport rep;
  rep.c_min = rep.signed_min = std::numeric_limits<double>::infinity();
  rep.c_max = rep.signed_max = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = nx == 1 ? a : a + (b - a) * i / (nx - 1);
    for (int j = 0; j < ny; ++j) {
      const double ay = std::exp(std::log(y_max) * j / (ny - 1));
      for (double y : {ay, -ay}) {
        const double r = gamma_ratio(x, y);
        rep.c_min = std::min(rep.c_min, r);
        rep.c_max = std::max(rep.c_max, r);
        // The printed form uses exp(-pi y / 2) with signed y.
        const double signed_r = r * std::exp(0.5 * std::numbers::pi * (std::abs(y) - y));
        rep.signed_min = std::min(rep.signed_min, signed_r);
        rep.signed_max = std::max(rep.signed_max, signed_r);
        ++rep.samples;
      }
    }
  }
  return rep;
}

}  // namespace koranyi
