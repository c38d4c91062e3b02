#pragma once

// Special functions used throughout: Laguerre functions, reduced Bessel
// functions and their derivatives, Hermite functions, complex Gamma and Beta.

#include <complex>
#include <span>
#include <vector>

namespace koranyi {

// l_n(x) = L_n^0(x) exp(-x/2), with |l_n| <= 1 on [0, inf).
double laguerre_fn(int n, double x);

// m-th derivative of l_n at x (m <= 8).
double laguerre_fn_deriv(int n, double x, int m);

// l_n^(m)(x) for m = 0..max_m written to out[0..max_m].
void laguerre_fn_derivs(int n, double x, int max_m, std::span<double> out);

// Reduced Bessel function G(alpha+1) (s/2)^-alpha J_alpha(s), normalised to
// 1 at the origin, and its derivatives in s.
//
// alpha must exceed -1 (the centre of N_2 is one-dimensional and needs
// alpha = -1/2, where the function is cos s). Power series below
// s = max(10, 2 alpha), Miller backward recurrence in the middle range and
// the Hankel expansion for large s.
double reduced_bessel(double alpha, double s, int deriv = 0);

// Derivatives 0..max_deriv written to out[0..max_deriv].
void reduced_bessel_derivs(double alpha, double s, int max_deriv, std::span<double> out);

constexpr int kMaxBesselDeriv = 8;

// Large-argument form of the n-th derivative of the reduced Bessel function:
//   J^(n)(s) ~ Re[ exp(i w(s)) sum_m coeff[m] s^(-m - alpha - 1/2) ],
//   w(s) = s - alpha pi/2 - pi/4.
struct BesselAsymptotic {
  double alpha = 0.0;
  int deriv = 0;
  std::vector<std::complex<double>> coeff;

  static BesselAsymptotic make(double alpha, int deriv, int terms = 24);
  double phase(double s) const;
  // Complex envelope sum_m coeff[m] s^(-m-alpha-1/2), truncated at the
  // smallest term.
  std::complex<double> envelope(double s) const;
  double value(double s) const;
};

// Integral of exp(i <x, y>) against the uniform probability measure on the
// unit sphere of R^n, as a function of |x|: the reduced Bessel function of
// order (n-2)/2.
double sphere_plane_wave(int n, double xnorm);

// Orthonormal Hermite function h_l(x) = (2^l l! sqrt(pi))^(-1/2) e^{-x^2/2} H_l(x).
double hermite_weber(int l, double x);
constexpr int kMaxHermiteDegree = 60;

std::complex<double> log_gamma(std::complex<double> z);
std::complex<double> complex_gamma(double x, double y);

double beta_fn(double p, double q);

// Observed range of exp(-pi/2 |y|) |y|^(x-1/2) / |Gamma(x+iy)| on a grid of
// x in [a, b] and 1 <= |y| <= y_max. The "signed" fields use exp(-pi/2 y)
// verbatim, so they are bounded only for y > 0.
struct GammaRatioReport {
  double c_min = 0.0;
  double c_max = 0.0;
  double signed_min = 0.0;
  double signed_max = 0.0;
  int samples = 0;
};

GammaRatioReport gamma_ratio_estimate_check(double a, double b, double y_max, int nx, int ny);

double gamma_ratio(double x, double y);

}  // namespace koranyi
