#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "koranyi/special.hpp"

namespace koranyi {

namespace {

double series_switch(double alpha) { return std::max(10.0, 2.0 * alpha); }
double asymptotic_switch(double alpha) { return std::max(40.0, 4.0 * alpha * alpha); }

// Power series sum_k (-1)^k (s/2)^{2k} / (k! (alpha+1)_k), differentiated
// term by term.
void series_derivs(double alpha, double s, int max_deriv, std::span<double> out) {
  std::fill(out.begin(), out.begin() + max_deriv + 1, 0.0);
  double ck = 1.0;  // coefficient of s^{2k}
  for (int k = 0; k < 400; ++k) {
    if (k > 0) ck *= -1.0 / (4.0 * k * (alpha + k));
    bool small = k > 2;
    for (int n = 0; n <= max_deriv; ++n) {
      const int p = 2 * k - n;
      if (p < 0) continue;
      double f = ck;
      for (int q = 0; q < n; ++q) f *= (2 * k - q);
      const double term = f * (p == 0 ? 1.0 : std::pow(s, p));
      out[n] += term;
      if (std::abs(term) > 1e-18 * std::max(1.0, std::abs(out[n]))) small = false;
    }
    if (small && k > s) break;
  }
}

// Miller backward recurrence: reduced Bessel values of orders
// alpha, alpha+1, ..., alpha+count-1 at s > 0.
void miller_block(double alpha, double s, int count, std::span<double> out) {
  const int n_top = count + static_cast<int>(std::ceil(s)) + 30 + static_cast<int>(std::ceil(std::sqrt(40.0 * s)));
  std::vector<double> y(static_cast<std::size_t>(count), 0.0);
  double y_next = 0.0;
  double y_cur = 1e-280;
  double norm = 0.0;  // y_0 + sum_{m>=1} (alpha + 2m) r_m y_{2m}
  // r_m = Gamma(alpha+m) / (m! Gamma(alpha+1)), needed for m up to n_top/2.
  std::vector<double> r(static_cast<std::size_t>(n_top / 2 + 2), 0.0);
  if (r.size() > 1) r[1] = 1.0;
  for (std::size_t m = 2; m < r.size(); ++m) r[m] = r[m - 1] * (alpha + m - 1.0) / static_cast<double>(m);

  for (int k = n_top; k >= 0; --k) {
    if (k < count) y[k] = y_cur;
    if (k % 2 == 0) norm += (k == 0 ? 1.0 : (alpha + k) * r[k / 2]) * y_cur;
    if (k == 0) break;
    const double y_prev = 2.0 * (alpha + k) / s * y_cur - y_next;
    y_next = y_cur;
    y_cur = y_prev;
    if (std::abs(y_cur) > 1e250) {
      constexpr double scale = 1e-250;
      y_cur *= scale;
      y_next *= scale;
      norm *= scale;
      for (auto& e : y) e *= scale;
    }
  }
  // J_{alpha+k} = (s/2)^alpha y_k / (Gamma(alpha+1) norm), hence
  // reduced_{alpha+k} = (alpha+1)_k (2/s)^k y_k / norm.
  double poch = 1.0;
  for (int k = 0; k < count; ++k) {
    out[k] = poch * y[k] / norm;
    poch *= (alpha + k + 1.0) * 2.0 / s;
  }
}

// n-th derivative as a combination sum c s^m J_{alpha+k} from
// J_a' = -s / (2(a+1)) J_{a+1}.
struct Term {
  double c;
  int m;
  int k;
};

std::vector<Term> derivative_terms(double alpha, int n) {
  std::vector<Term> terms{{1.0, 0, 0}};
  for (int d = 0; d < n; ++d) {
    std::vector<Term> next;
    auto add = [&next](double c, int m, int k) {
      for (auto& t : next)
        if (t.m == m && t.k == k) {
          t.c += c;
          return;
        }
      next.push_back({c, m, k});
    };
    for (const auto& t : terms) {
      if (t.m > 0) add(t.c * t.m, t.m - 1, t.k);
      add(-t.c / (2.0 * (alpha + t.k + 1.0)), t.m + 1, t.k + 1);
    }
    terms = std::move(next);
  }
  return terms;
}

void miller_derivs(double alpha, double s, int max_deriv, std::span<double> out) {
  std::array<double, kMaxBesselDeriv + 1> block{};
  miller_block(alpha, s, max_deriv + 1, block);
  for (int n = 0; n <= max_deriv; ++n) {
    double v = 0.0;
    for (const auto& t : derivative_terms(alpha, n)) v += t.c * std::pow(s, t.m) * block[t.k];
    out[n] = v;
  }
}

}  // namespace

namespace {

const BesselAsymptotic& cached_asymptotic(double alpha, int deriv) {
  thread_local std::vector<BesselAsymptotic> cache;
  for (const auto& c : cache)
    if (c.alpha == alpha && c.deriv == deriv) return c;
  if (cache.size() > 64) cache.clear();
  cache.push_back(BesselAsymptotic::make(alpha, deriv));
  return cache.back();
}

}  // namespace

BesselAsymptotic BesselAsymptotic::make(double alpha, int deriv, int terms) {
  BesselAsymptotic a;
  a.alpha = alpha;
  a.deriv = deriv;
  // Hankel: J_nu(x) = Re[ sqrt(2/pi) e^{i w} sum_k i^k a_k(nu) x^{-k-1/2} ].
  const double mu = 4.0 * alpha * alpha;
  const double scale = std::exp(std::lgamma(alpha + 1.0) + alpha * std::log(2.0)) * std::sqrt(2.0 / std::numbers::pi);
  std::vector<std::complex<double>> b(static_cast<std::size_t>(terms + deriv));
  double ak = 1.0;
  std::complex<double> ik(1.0, 0.0);
  for (int k = 0; k < terms + deriv; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      ak *= (mu - odd * odd) / (8.0 * k);
      ik *= std::complex<double>(0.0, 1.0);
    }
    b[k] = scale * ik * ak;
  }
  // d/ds [e^{iw} s^{-m-p}] = e^{iw} (i s^{-m-p} - (m+p) s^{-m-p-1}).
  const double p = alpha + 0.5;
  for (int d = 0; d < deriv; ++d) {
    std::vector<std::complex<double>> nb(b.size());
    for (std::size_t m = 0; m < b.size(); ++m) {
      nb[m] = std::complex<double>(0.0, 1.0) * b[m];
      if (m > 0) nb[m] -= (static_cast<double>(m) - 1.0 + p) * b[m - 1];
    }
    b = std::move(nb);
  }
  b.resize(static_cast<std::size_t>(terms));
  a.coeff = std::move(b);
  return a;
}

double BesselAsymptotic::phase(double s) const { return s - 0.5 * alpha * std::numbers::pi - 0.25 * std::numbers::pi; }

std::complex<double> BesselAsymptotic::envelope(double s) const {
  const double inv = 1.0 / s;
  std::complex<double> sum = 0.0;
  double pw = std::pow(s, -(alpha + 0.5));
  double last = std::numeric_limits<double>::infinity();
  for (const auto& c : coeff) {
    const std::complex<double> term = c * pw;
    const double mag = std::abs(term);
    if (mag > last && mag > 0.0) break;  // asymptotic series: stop at the smallest term
    sum += term;
    if (mag <= 1e-17 * std::abs(sum)) break;
    last = mag;
    pw *= inv;
  }
  return sum;
}

double BesselAsymptotic::value(double s) const {
  const double w = phase(s);
  return (std::complex<double>(std::cos(w), std::sin(w)) * envelope(s)).real();
}

void reduced_bessel_derivs(double alpha, double s, int max_deriv, std::span<double> out) {
  if (!(alpha > -1.0)) throw std::domain_error("reduced_bessel: order must exceed -1");
  if (!(s >= 0.0)) throw std::domain_error("reduced_bessel: argument must be >= 0");
  if (max_deriv < 0 || max_deriv > kMaxBesselDeriv) throw std::invalid_argument("reduced_bessel: unsupported derivative order");
  if (out.size() < static_cast<std::size_t>(max_deriv + 1)) throw std::invalid_argument("reduced_bessel: output too short");
  if (s < series_switch(alpha)) {
    series_derivs(alpha, s, max_deriv, out);
  } else if (s < asymptotic_switch(alpha)) {
    miller_derivs(alpha, s, max_deriv, out);
  } else {
    for (int n = 0; n <= max_deriv; ++n) out[n] = cached_asymptotic(alpha, n).value(s);
  }
}

double reduced_bessel(double alpha, double s, int deriv) {
  std::array<double, kMaxBesselDeriv + 1> buf{};
  if (deriv < 0 || deriv > kMaxBesselDeriv) throw std::invalid_argument("reduced_bessel: unsupported derivative order");
  reduced_bessel_derivs(alpha, s, deriv, buf);
  return buf[deriv];
}

double sphere_plane_wave(int n, double xnorm) {
  if (n < 2) throw std::invalid_argument("sphere_plane_wave: n must be >= 2");
  return reduced_bessel(0.5 * (n - 2), xnorm, 0);
}

}  // namespace koranyi
