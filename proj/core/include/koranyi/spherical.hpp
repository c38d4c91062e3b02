#pragma once

// Bounded spherical functions of the Gelfand pair (N_v, O(v)).
//
//   Theta(exp(X+A)) = e^{i r x_v} e^{i <D_2(Lambda), A>} prod_j l_{l_j}(lambda_j |pr_j X|^2 / 2)
//   phi(n)          = int_{O(v)} Theta(k.n) dk
//
// and the pairing with the dilated sphere measure,
//
//   <mu_s, phi> = 2 int_0^1 [int e^{itsr x_v} prod_j l_{l_j}(lambda_j s^2 t^2 |pr_j X|^2 / 2) dsigma_v(X)]
//                 J_{(z-2)/2}(s^2 sqrt(1-t^4) |D_2(Lambda)|) t^(v-1) (1-t^4)^((z-2)/2) dt,
//
// with the raw (unnormalised) measure mu.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "koranyi/group.hpp"
#include "koranyi/quadrature.hpp"

namespace koranyi {

struct SphericalParam {
  Dimensions dims;
  double r = 0.0;
  std::vector<double> lambda;  // length vprime
  std::vector<int> l;          // length vprime

  // Validates lengths, signs and the parity rule for r (r != 0 with v even
  // is rejected). Boundary points (equal lambdas, r = 0 with v odd, a zero
  // lambda) are accepted; see in_parameter_set().
  static SphericalParam make(Dimensions dims, double r, std::vector<double> lambda, std::vector<int> l);

  // Strictly decreasing positive lambdas and r > 0 exactly when v is odd.
  bool in_parameter_set() const;

  // |D_2(Lambda)| in centre coordinates: sqrt(sum lambda_j^2).
  double d2_norm() const;

  // (t r, t^2 Lambda, l).
  SphericalParam scaled(double t) const;

  std::string describe() const;
};

// Centre coordinates of D_2(Lambda): lambda_j at (2j-1, 2j), zero elsewhere.
std::vector<double> d2_coords(const SphericalParam& p);

// (x_{2j-1}, x_{2j}) for j = 1..vprime.
std::array<double, 2> proj_pair(std::span<const double> x, int j, Dimensions dims);

std::complex<double> theta_eval(const SphericalParam& p, const GroupElement& n);

struct McValue {
  std::complex<double> value;
  double std_error = 0.0;
  int samples = 0;
};

// Haar Monte-Carlo average of Theta(k.n). Sample i draws k from its own
// generator seeded from (seed, i), so the result does not depend on the
// thread count.
McValue phi_eval(const SphericalParam& p, const GroupElement& n, int n_haar, std::uint64_t seed);

// Reduced form of the integral over the unit sphere of R^v for integrands
// that depend on X only through |pr_j X|^2 and |x_v|. Under the uniform
// measure (|pr_1 X|^2, .., |pr_v' X|^2, x_v^2) is Dirichlet(1,..,1[,1/2]),
// so the integral becomes one over a simplex.
struct XNode {
  std::array<double, 2> w{};  // |pr_j X|^2
  double y = 0.0;             // |x_v| (odd v)
  double weight = 0.0;
};

// Nodes and weights fixed at a reference radius s_ref; evaluation at nearby
// s reuses them, which keeps finite differences smooth.
struct PairingPlan {
  SphericalParam param;
  double s_ref = 1.0;
  std::vector<RadialNode> radial;
  std::vector<XNode> xnodes;
  bool capped = false;  // resolution limit reached while building
};

struct PlanOptions {
  int points_per_panel = 8;
  int max_panels = 4000;
};

// v in [2, 5].
PairingPlan make_pairing_plan(const SphericalParam& p, double s_ref, const PlanOptions& opt = {});

// M[a][n] = sphere average of E^(a)(t, s) d^n/ds'^n prod_j l_{l_j}(lambda_j s' t^2 |pr_j X|^2 / 2)
// at s' = s^2, where E^(a) = (t r y)^a cos(t s r y + a pi / 2) is the real part of the
// a-th s-derivative of e^{itsr x_v}. Entries with a + n <= max_order (<= 3) are filled.
using SphereMoments = std::array<std::array<double, 4>, 4>;
SphereMoments sphere_moments(const PairingPlan& plan, double t, double s, int max_order);

// Derivatives 0..max_deriv (<= 3) of s -> <mu_s, phi> at s, on the plan's nodes.
std::array<double, 4> pairing_derivs(const PairingPlan& plan, double s, int max_deriv);

// <mu_s, phi> on an adaptive plan built at s.
std::complex<double> pairing_mu_s_phi(const SphericalParam& p, double s);

// <mu_s, phi> with caller-supplied radial nodes and a sphere rule on R^v.
std::complex<double> pairing_mu_s_phi(const SphericalParam& p, double s, const std::vector<RadialNode>& t_rule,
                                      const SphereRule& xsphere);

enum class DerivMethod { analytic, finite_diff };

// d^j/ds^j <mu_s, phi>, j in 0..3. The finite-difference method applies a
// 5-point central stencil to the order-0 pairing on one plan. The step is
// step_rel over the local oscillation frequency in s; for j = 3 the stencil
// is Richardson-extrapolated from steps h and 2h.
std::complex<double> pairing_derivative(const SphericalParam& p, double s, int j, DerivMethod method,
                                        double step_rel = 2e-2);

}  // namespace koranyi
