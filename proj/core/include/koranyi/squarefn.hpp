#pragma once

// Square-function functionals of the pairing,
//
//   S^j(phi) = ( int_0^inf |d^j/ds^j <mu_s, phi>|^2 s^(2j-1) ds )^(1/2),
//
// their scans over parameter ladders, the pieces b^{g,j} of the derivative
// decomposition, and Bessel moment integrals.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "koranyi/spherical.hpp"

namespace koranyi {

struct ShatOptions {
  double s_min_rel = 1e-3;     // s_min in units of the intrinsic scale
  double octave_stop = 5e-3;   // stop once an octave adds less than this fraction
  double max_octaves = 24;     // hard cap past the intrinsic scale
  double rel_tol = 1e-6;       // Gauss-Kronrod error per panel relative to the running total
  int max_depth = 12;
  double panel_phase = 60.0;   // initial panel width in s is panel_phase / local frequency
  PlanOptions plan{};
};

struct ShatResult {
  SphericalParam param;
  int j = 1;
  double value = 0.0;      // sqrt of head + body + tails
  double integral = 0.0;   // value^2
  double s_min = 0.0;
  double s_max = 0.0;
  double scale = 1.0;      // intrinsic scale 1 / max(sqrt(lambda_1), r)
  double tail_small = 0.0;
  double tail_large = 0.0;
  double tail_bound = 0.0; // tail_small + tail_large
  int evaluations = 0;
  bool capped = false;     // some plan hit its panel cap
  bool ok = false;         // tails below 1% of value^2 and decay reached
  std::string diagnostic;
};

// Integrates |pairing_derivs(.)[j]|^2 s^(2j-1) octave by octave with
// adaptive Gauss-Kronrod panels.
// The small-s tail uses the local power law at s_min; the large-s tail
// extrapolates the geometric decay of the last octaves.
ShatResult shat(const SphericalParam& p, int j, const ShatOptions& opt = {});

// Parameter ladders. A ray ladder keeps the shape lambda / lambda_1 fixed
// and scales lambda_1 (and r by sqrt of the same factor); a pinned ladder
// fixes the smallest lambda and scales the others.
enum class LadderMode { ray, pinned };

struct ScanGrid {
  int v = 4;
  std::vector<double> rungs{1, 4, 16, 64, 256, 1024};
  std::vector<std::vector<double>> shapes;   // each of length vprime, shape[0] = 1, decreasing
  std::vector<int> l_values{0, 1, 5, 20};    // used in every slot
  std::vector<double> r_over_sqrt_lambda{1}; // odd v only
  LadderMode mode = LadderMode::ray;

  static ScanGrid default_grid(int v);
  std::vector<SphericalParam> rung_params(std::size_t rung) const;
  std::size_t size() const;
};

struct ScanReport {
  int v = 4;
  int j = 1;
  LadderMode mode = LadderMode::ray;
  std::vector<ShatResult> points;       // rung-major
  std::vector<double> rung_sup;
  std::vector<double> ratios;           // rung_sup[k+1] / rung_sup[k]
  double sup = 0.0;
  bool all_ok = true;
  bool stabilized = false;              // outermost two ratios within the band
  std::string verdict;                  // "uniformly bounded", "non-uniform" or "tail failure"
};

ScanReport scan_shat(const ScanGrid& grid, int j, const ShatOptions& opt = {}, double band = 0.05);

// Chain-rule coefficients of d^h/ds^h f(s^2) = sum_j c(h,j) s^{d(j,h)} f^{(h'+j)}(s^2),
// h' = ceil(h/2), d(j,h) = 2j + (h mod 2), 0 <= j <= floor(h/2). Frozen for h <= 3.
int chain_coeff(int h, int j);
int chain_power(int j, int h);
int half_ceil(int h);

// check-b^{htilde,n}(t,s): the sphere average of (i r t x_v)^htilde e^{itsr x_v}
// times the n-th derivative in s' of prod_j l_{l_j}(lambda_j s' t^2 |pr_j X|^2 / 2)
// at s' = s^2. Real up to rounding; returned as complex.
std::complex<double> eval_check_b(const SphericalParam& p, double t, double s, int htilde, int n);

// b^{g,j}(s) for g = (h1, h2), j = (j1, j2), htilde = h - h1 - h2.
std::complex<double> eval_b_gj(const SphericalParam& p, double s, std::array<int, 2> g, std::array<int, 2> jj,
                               int h);

// sum over htilde + h1 + h2 = h of the multinomial times c(h1,j1) c(h2,j2) b^{g,j}, times 2.
std::complex<double> reconstruct_derivative(const SphericalParam& p, double s, int h);

struct MajorantReport {
  double c_fit = 0.0;        // max ratio on the fitting half
  double c_validate = 0.0;   // max ratio on the validation half
  int points = 0;
  bool ok = false;           // c_validate <= c_fit * (1 + slack)
};

// |check-b^{htilde,n}(t,s)| against ||A||^n t^{2n} s^{-htilde} sum_{i<=htilde} (||A|| s^2 t^2)^i.
MajorantReport check_b_majorant(const SphericalParam& p, int htilde, int n, const std::vector<double>& t_grid,
                                const std::vector<double>& s_grid, double slack = 0.25);

// Least-squares slope of log|check-b| against log s.
double check_b_decay_slope(const SphericalParam& p, double t, int htilde, int n, const std::vector<double>& s_grid);

// int_0^T |J_alpha^(n)(s)|^2 s^beta ds for the reduced Bessel function.
double bessel_moment(double alpha, int nderiv, double beta, double T);

// Leading asymptotic tail int_T^inf of the same integrand (infinite when
// beta >= 2 alpha), from the Hankel envelope plus its first oscillatory term.
double bessel_moment_tail(double alpha, int nderiv, double beta, double T);

}  // namespace koranyi
