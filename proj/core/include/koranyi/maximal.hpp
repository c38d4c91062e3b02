#pragma once

// Analytic family m^alpha, A^alpha, B^alpha_{h,j} and grid-discretized maximal
// operators on N_2 (coordinates (x1, x2, a)).
//
// Convolution convention: f*mu_t(n) = int f(n . (t.m)^{-1}) dmu(m).

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "koranyi/group.hpp"
#include "koranyi/quadrature.hpp"

namespace koranyi {

// m^alpha(r) = 2 (1 - r^2)_+^(alpha - 1) / Gamma(alpha). At a pole of Gamma the
// value is 0 and `pole` is set.
std::complex<double> m_alpha(double r, std::complex<double> alpha, bool* pole = nullptr);

class GridField {
 public:
  GridField() = default;
  GridField(int n, double L, double fill = 0.0);

  int n() const { return n_; }
  double L() const { return L_; }
  double spacing() const { return 2.0 * L_ / n_; }
  // node i sits at -L + (i + 1/2) h
  double coord(int i) const { return -L_ + (i + 0.5) * spacing(); }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  double& at(int i, int j, int k) { return values_[index(i, j, k)]; }
  double at(int i, int j, int k) const { return values_[index(i, j, k)]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  // Trilinear interpolation, zero outside the grid.
  double sample(double x1, double x2, double a) const;
  // Catmull-Rom tricubic (C^1), zero outside the grid.
  double sample_cubic(double x1, double x2, double a) const;

  static GridField from_function(int n, double L, const std::function<double(double, double, double)>& f);

  GridField abs() const;
  bool finite() const;

 private:
  int n_ = 0;
  double L_ = 1.0;
  std::vector<double> values_;
};

// Grid points whose three coordinates lie in [-half_width, half_width].
struct Interior {
  double half_width = 0.0;
  bool contains(const GridField& g, int i, int j, int k) const;
  std::size_t count(const GridField& g) const;
};

struct RadiiLadder {
  double r0 = 0.1;
  double ratio = 1.25;
  int K = 10;
  RadiiLadder() = default;
  RadiiLadder(double r0_, double ratio_, int K_);
  double radius(int k) const;
  double r_max() const { return radius(K); }
  std::vector<double> radii() const;
  RadiiLadder scaled(double c) const { return RadiiLadder(r0 * c, ratio, K); }
};

// Thrown when samples needed on the interior would leave the grid.
struct MarginError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checks that every m with |m| <= radius, translated from interior points,
// stays inside the box.
void check_margin(const GridField& f, const Interior& in, double radius, const char* who);

// Default sphere rule for the grid experiments: radial Gauss nodes in t,
// uniform circle for the X direction, {+1, -1} for a.
KoranyiSphereRule grid_sphere_rule(int t_points = 12, int circle_points = 24);

enum class Interp { linear, cubic };

// Radial kernel profile K(rho) in the Korányi norm, supported in rho <= support.
struct RadialKernel {
  std::string name;
  std::function<double(double)> profile;
  double support = 1.0;
  double l1_norm(double mu_mass) const;   // mu(S_1) int_0^support K(rho) rho^3 d rho
};

RadialKernel ball_kernel();                 // |B_1|^{-1} 1_{B_1}
RadialKernel bump_kernel();                 // (1 - rho^2)_+ normalized to mass 1
RadialKernel mollifier_kernel();            // exp(-1/(1 - rho^2)) normalized to mass 1

// (f * K_t)(n) = int f(n.m^{-1}) t^{-Q} K(|delta_{1/t} m|) dm over a lattice
// stencil of the support ball; zero extension outside the grid.
GridField conv_radial_kernel(const GridField& f, const RadialKernel& k, double t, const Interior& in,
                             int stencil_per_radius = 8);

// f*mu_t with the raw measure.
GridField spherical_average(const GridField& f, double t, const KoranyiSphereRule& rule, const Interior& in,
                            Interp interp = Interp::linear);

// max over the ladder of the ball averages of |f|. Normalization by the
// stencil's own volume, which tends to r^Q |B_1|.
GridField standard_maximal(const GridField& f, const RadiiLadder& ladder, const Interior& in,
                           int stencil_per_radius = 8);

// max over the ladder of |f| * mu_t with mu normalized to mass 1.
GridField spherical_maximal(const GridField& f, const RadiiLadder& ladder, const KoranyiSphereRule& rule,
                            const Interior& in);

// (sum over the s-grid of |d/ds (f*mu_s)|^2 s ds)^(1/2), raw mu, central
// differences, trapezoid weights. s_grid must be increasing and start at 0
// or above.
GridField grid_square_function_s1(const GridField& f, const std::vector<double>& s_grid,
                                  const KoranyiSphereRule& rule, const Interior& in);

struct PointwiseBoundReport {
  std::size_t points = 0;
  std::size_t satisfied = 0;
  double fraction = 0.0;
  double worst_ratio = 0.0;     // max of A f / bound over points with bound > 0
  double mu_mass = 0.0;         // Q |B_1|
  double eps = 0.05;
  double seconds = 0.0;
};

// The two sides of the estimate on the grid, zero off the interior.
struct PointwiseBoundFields {
  GridField lhs;    // A f, raw mu
  GridField bound;  // Q|B_1| M f + (2Q)^{-1/2} S^1 f
};

// A f <= Q|B_1| M f + (2Q)^{-1/2} S^1 f pointwise (raw mu on the left), with
// slack 1 + eps. The ladder radii are taken from a uniform s-grid of step
// ds up to ladder.r_max(), so A and M share radii.
PointwiseBoundReport pointwise_bound_check(const GridField& f, const RadiiLadder& ladder, int s_steps,
                                           const KoranyiSphereRule& rule, const Interior& in, double eps = 0.05,
                                           PointwiseBoundFields* fields = nullptr);

// Point evaluations (no grid output) for the analytic family.
struct FamilyQuad {
  int r_points = 16;        // Gauss points per panel in r
  int r_panels = 6;         // geometric panels towards r = 1
  double fd_step = 2e-3;    // central difference step for d/dr
  Interp interp = Interp::cubic;
};

std::complex<double> a_alpha_at(const GridField& f, const GroupElement& n, std::complex<double> alpha,
                                const KoranyiSphereRule& rule, const FamilyQuad& q = {});
std::complex<double> b_hj_at(const GridField& f, const GroupElement& n, std::complex<double> alpha, int h, int j,
                             const KoranyiSphereRule& rule, const FamilyQuad& q = {});
// f*mu at a point.
double sphere_conv_at(const GridField& f, const GroupElement& n, double t, const KoranyiSphereRule& rule,
                      Interp interp = Interp::linear);

GridField a_alpha_apply(const GridField& f, std::complex<double> alpha, const KoranyiSphereRule& rule,
                        const Interior& in, const FamilyQuad& q = {});
GridField b_hj_apply(const GridField& f, std::complex<double> alpha, int h, int j, const KoranyiSphereRule& rule,
                     const Interior& in, const FamilyQuad& q = {});

struct FamilyIdentityReport {
  double alpha = 1.0;
  double max_rel_corrected = 0.0;   // A vs 1/2 (B_{1,1} + (Q-2) B_{1,0})
  double max_rel_stated = 0.0;      // A vs -1/2 (B_{1,1} + Q B_{1,0})
  std::vector<double> limit_alphas;
  std::vector<double> limit_rel_corrected;   // B-combination vs f*mu
  std::vector<double> limit_rel_stated;
  int points = 0;
};

// Evaluates both forms of the integration-by-parts identity at sample points.
FamilyIdentityReport analytic_family_check(const GridField& f, const std::vector<GroupElement>& points,
                                           const KoranyiSphereRule& rule, const FamilyQuad& q = {});

struct KernelDominationReport {
  double x = 1.0, y = 0.0;
  double gamma_factor = 0.0;        // |Gamma(x) / Gamma(x+iy)|
  double observed_c = 0.0;          // gamma_factor / e^{2|y|}
  double max_ratio = 0.0;           // max |A^{x+iy} f| / (gamma_factor A^x |f|)
  int points = 0;
  bool ok = false;
};

KernelDominationReport kernel_domination_check(double x, double y, const GridField& f,
                                               const std::vector<GroupElement>& points,
                                               const KoranyiSphereRule& rule, const FamilyQuad& q = {},
                                               double tol = 1e-9);

struct DecreasingKernelReport {
  std::size_t points = 0;
  std::size_t satisfied = 0;
  double fraction = 0.0;
  double worst_ratio = 0.0;
  double kernel_l1 = 0.0;
};

// sup over the ladder of |f * K_r| <= ||K||_1 M f with slack 1 + eps.
// Throws std::invalid_argument when the profile increases somewhere.
DecreasingKernelReport decreasing_kernel_maximal_check(const RadialKernel& k, const GridField& f,
                                                       const RadiiLadder& ladder, const Interior& in,
                                                       double eps = 0.05);

// Sum of Gaussian bumps exp(-|n0^{-1} n|^4 / w^4) with random centres,
// widths and signs; reproducible from the seed.
GridField random_bumps(int n, double L, int bumps, double centre_box, std::uint64_t seed, bool signed_amp = false);

}  // namespace koranyi
