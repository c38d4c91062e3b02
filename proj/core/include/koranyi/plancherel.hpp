#pragma once

// Plancherel density and matrix elements of radial functions against the
// bounded spherical functions, with a numerical Plancherel check on N_2.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "koranyi/spherical.hpp"

namespace koranyi {

// prod lambda_i * prod_{j<k} (lambda_j^2 - lambda_k^2)^2 for v even,
// prod lambda_i^3 * the same product for v odd. Zero on the boundary
// (equal or vanishing lambdas); negative entries are rejected.
double eta_density(const std::vector<double>& lambda, int v);

// f(exp(X + A)) = u(|X|, |a|), negligible outside |X| <= rx, |a| <= ra.
struct RadialProfile {
  std::string name;
  std::function<double(double, double)> u;
  double rx = 6.0;
  double ra = 6.0;
};

// u = amp * exp(-alpha rho^2 - beta a^2); decay radii set for a 1e-16 cut.
RadialProfile gaussian_profile(double alpha, double beta, double amp = 1.0);

struct MatrixElementSpec {
  int rho_points = 16;    // Gauss points per panel in |X|
  int a_points = 16;      // Gauss points per panel in |a|
  int sphere_k = 12;      // product rule points per level on the sphere of R^v
};

// <f, phi^{r,Lambda,l}> = int_N f Theta: |X| and |a| as outer variables,
// the direction of X by a product rule on the sphere of R^v, and the
// direction of a in closed form (reduced Bessel of order (z-2)/2).
std::complex<double> radial_matrix_element(const RadialProfile& f, const SphericalParam& p,
                                           const MatrixElementSpec& spec = {});

// Closed form for the Gaussian profile on N_2:
//   (2 pi / lambda) (c-1)^l / c^(l+1) * sqrt(pi/beta) exp(-lambda^2 / (4 beta)),  c = 2 alpha / lambda + 1/2.
double gaussian_matrix_element_v2(double alpha, double beta, double lambda, int l);

struct PlancherelProfileResult {
  std::string name;
  double lhs = 0.0;               // ||f||^2 by 3-D quadrature
  double rhs = 0.0;               // int_0^lambda_max sum_{l <= l_max} |<f,phi>|^2 lambda d lambda
  double rel_err = 0.0;           // |c rhs - lhs| / lhs with the fitted c
  double l_tail = 0.0;            // fraction missing beyond l_max (Laguerre completeness)
  double last_l_shell = 0.0;      // fraction carried by l = l_max
  double lambda_tail = 0.0;       // fraction on [lambda_max, 2 lambda_max]
};

struct PlancherelReport {
  double fitted_constant = 0.0;
  std::vector<PlancherelProfileResult> profiles;
  double lambda_max = 0.0;
  int l_max = 0;
  bool aborted = false;           // some tail exceeded 1%
  std::string message;
};

struct PlancherelSpec {
  int lambda_panels = 24;         // geometric panels towards 0 plus uniform ones
  int lambda_points = 12;
  int rho_per_oscillation = 12;
  int a_points = 160;              // minimum Gauss points in |a|; more at large lambda
  int cube_points = 120;          // per axis for the 3-D norm
};

PlancherelReport plancherel_check_v2(const std::vector<RadialProfile>& profiles, double lambda_max, int l_max,
                                     const PlancherelSpec& spec = {});

}  // namespace koranyi
