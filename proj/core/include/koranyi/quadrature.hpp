#pragma once

// Quadrature: Gauss rules on intervals, rules for the uniform probability
// measure on Euclidean spheres, the sphere measure mu on the unit Koranyi
// sphere and the polar-coordinate formula
//   int_N f = int_0^inf int_{S_1} f(r.n) dmu(n) r^(Q-1) dr,
// with
//   int_{S_1} f dmu = 2 int_0^1 int int f(exp(tX + sqrt(1-t^4) Z))
//                     dsigma_z(Z) dsigma_v(X) t^(v-1) (1-t^4)^((z-2)/2) dt.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "koranyi/group.hpp"

namespace koranyi {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = 0.0;
  double hi = 1.0;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R s{};
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Gauss-Legendre on [lo, hi]; Newton on the Legendre recurrence.
Rule1D gauss_legendre(int npts, double lo = -1.0, double hi = 1.0);

// panels equal sub-intervals with an npts-point Gauss rule each.
Rule1D composite_gauss_legendre(int npts, int panels, double lo, double hi);

// Gauss rule for the probability measure proportional to (1-u^2)^expo on
// [-1, 1] (Gegenbauer weight), via Golub-Welsch. expo > -1.
Rule1D gauss_gegenbauer(int npts, double expo);

enum class SphereRuleKind { exact, product, monte_carlo, zonal };

std::string to_string(SphereRuleKind k);
SphereRuleKind sphere_rule_kind_from_string(const std::string& s);

// Rule for the uniform probability measure on the unit sphere of R^n.
//
// exact:       n = 1 (the two points +-1) or n = 2 (trapezoid on the angle).
// product:     y_1 = u, (y_2..y_n) = sqrt(1-u^2) y' recursively, with a
//              Gegenbauer rule in u at each level and a trapezoid rule on the
//              final circle. k points per level integrate spherical
//              polynomials of degree 2k-1 exactly. Points are generated on
//              the fly, never stored.
// monte_carlo: normalised Gaussian directions from a seeded generator.
// zonal:       Gegenbauer nodes along one axis; exact only for functions of
//              <axis, y>.
struct SphereRule {
  int n = 2;
  SphereRuleKind kind = SphereRuleKind::exact;
  int level_points = 0;   // product: Gegenbauer points per level
  int circle_points = 0;  // product / exact n = 2: trapezoid points
  std::vector<Rule1D> levels;
  std::vector<double> points;  // explicit kinds: row-major size() x n
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::vector<double> axis;

  std::size_t size() const;

  // f(span<const double> y, double w) for every node.
  template <class F>
  void for_each(F&& f) const;

  // Explicit copy of all points (row-major) and weights.
  void materialize(std::vector<double>& pts, std::vector<double>& w) const;
};

// target_points is a size hint: the trapezoid count for n = 2, the sample
// count for Monte-Carlo and roughly the total count for product rules.
SphereRule sphere_rule(int n, int target_points, SphereRuleKind kind, std::uint64_t seed = 0);

// Product rule with k points per level (exact to degree 2k-1).
SphereRule product_sphere_rule(int n, int k);
SphereRule monte_carlo_sphere_rule(int n, int samples, std::uint64_t seed);
SphereRule zonal_sphere_rule(std::span<const double> axis, int npts);

struct SphereEstimate {
  std::complex<double> value;
  double std_error = 0.0;  // nonzero for Monte-Carlo rules only
};

template <class F>
SphereEstimate sphere_integrate(const SphereRule& rule, F&& f);

// One node of the radial part of the mu rule. c = sqrt(1-t^4) is stored
// separately because near t = 1 it is computed from the substituted
// variable without cancellation. w carries 2 t^(v-1) (1-t^4)^((z-2)/2) dt.
struct RadialNode {
  double t = 0.0;
  double c = 1.0;
  double w = 0.0;
};

// Radial nodes on [0,1]: Gauss-Legendre in t on [0, t_c] and in
// u = sqrt(1-t^4) on [0, 1/2] near t = 1, which removes the endpoint
// singularity for z = 1 and the square-root behaviour for odd z.
// Each part gets `panels` panels of npts points.
std::vector<RadialNode> radial_nodes(Dimensions dims, int npts, int panels = 1);

struct KoranyiSphereRule {
  Dimensions dims;
  std::vector<RadialNode> radial;
  SphereRule x_rule;  // ambient v
  SphereRule z_rule;  // ambient z
  double total_mass = 0.0;

  std::size_t size() const { return radial.size() * x_rule.size() * z_rule.size(); }
  // Weight multiplier turning mu into a probability measure.
  double normalizer() const { return 1.0 / total_mass; }
};

// 1/2 B(v/4, z/2).
double sphere_mass(Dimensions dims);

// The polar formula with this mu holds for the Haar measure
// dn = dX dA / (|S^{v-1}| |S^{z-1}|); this returns that density.
double haar_density(Dimensions dims);

KoranyiSphereRule koranyi_sphere_rule(Dimensions dims, std::vector<RadialNode> radial, SphereRule x_rule,
                                      SphereRule z_rule);

// Defaults: 32-point radial parts, product sphere rules with k points per
// level for ambient dimension <= 6 and Monte-Carlo above.
KoranyiSphereRule default_koranyi_rule(Dimensions dims, int t_points = 32, int k = 8, int mc_samples = 4096,
                                       std::uint64_t seed = 1);

// Flat copy of all nodes: point p has x = xs[p*v..], a = as[p*z..], weight w[p].
struct SpherePoints {
  Dimensions dims;
  std::vector<double> xs;
  std::vector<double> as;
  std::vector<double> w;
  std::size_t size() const { return w.size(); }
};
SpherePoints materialize(const KoranyiSphereRule& rule);

// int_{S_1} f dmu for f(const GroupElement&) returning double or complex.
template <class F>
auto koranyi_sphere_integrate(const KoranyiSphereRule& rule, F&& f) -> decltype(f(std::declval<GroupElement>()));

// int_0^R int_{S_1} f(r.n) dmu(n) r^(Q-1) dr with r_rule on [0, R].
template <class F>
double polar_integrate(F&& f, const Rule1D& r_rule, const KoranyiSphereRule& sphere);

// ---------------------------------------------------------------------------

template <class F>
void SphereRule::for_each(F&& f) const {
  if (kind != SphereRuleKind::product) {
    for (std::size_t i = 0; i < weights.size(); ++i)
      f(std::span<const double>(points.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)),
        weights[i]);
    return;
  }
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  const int depth = static_cast<int>(levels.size());
  const double two_pi = 2.0 * 3.14159265358979323846;
  auto recurse = [&](auto&& self, int level, double scale, double weight) -> void {
    if (level == depth) {
      for (int c = 0; c < circle_points; ++c) {
        const double th = two_pi * c / circle_points;
        y[n - 2] = scale * std::cos(th);
        y[n - 1] = scale * std::sin(th);
        f(std::span<const double>(y), weight / circle_points);
      }
      return;
    }
    const Rule1D& r = levels[level];
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double u = r.nodes[i];
      y[level] = scale * u;
      self(self, level + 1, scale * std::sqrt(std::max(0.0, 1.0 - u * u)), weight * r.weights[i]);
    }
  };
  recurse(recurse, 0, 1.0, 1.0);
}

template <class F>
SphereEstimate sphere_integrate(const SphereRule& rule, F&& f) {
  std::complex<double> sum = 0.0;
  double sq = 0.0;
  rule.for_each([&](std::span<const double> y, double w) {
    const std::complex<double> v = f(y);
    sum += w * v;
    sq += w * std::norm(v);
  });
  SphereEstimate e{sum, 0.0};
  if (rule.kind == SphereRuleKind::monte_carlo && rule.size() > 1) {
    const double var = std::max(0.0, sq - std::norm(sum));
    e.std_error = std::sqrt(var / static_cast<double>(rule.size() - 1));
  }
  return e;
}

template <class F>
auto koranyi_sphere_integrate(const KoranyiSphereRule& rule, F&& f) -> decltype(f(std::declval<GroupElement>())) {
  using R = decltype(f(std::declval<GroupElement>()));
  const Dimensions d = rule.dims;
  R total{};
  std::vector<double> x(static_cast<std::size_t>(d.v)), a(static_cast<std::size_t>(d.z));
  for (const auto& rn : rule.radial) {
    R shell{};
    rule.x_rule.for_each([&](std::span<const double> X, double wx) {
      rule.z_rule.for_each([&](std::span<const double> Z, double wz) {
        for (int i = 0; i < d.v; ++i) x[i] = rn.t * X[i];
        for (int k = 0; k < d.z; ++k) a[k] = rn.c * Z[k];
        const R val = f(GroupElement(d, x, a));
        if constexpr (std::is_same_v<R, double>) {
          if (!std::isfinite(val)) throw std::domain_error("koranyi_sphere_integrate: integrand is not finite");
        } else {
          if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            throw std::domain_error("koranyi_sphere_integrate: integrand is not finite");
        }
        shell += (wx * wz) * val;
      });
    });
    total += rn.w * shell;
  }
  return total;
}

template <class F>
double polar_integrate(F&& f, const Rule1D& r_rule, const KoranyiSphereRule& sphere) {
  const int Q = sphere.dims.Q;
  double total = 0.0;
  for (std::size_t i = 0; i < r_rule.size(); ++i) {
    const double r = r_rule.nodes[i];
    if (r <= 0.0) continue;
    const double shell = koranyi_sphere_integrate(sphere, [&](const GroupElement& n) { return f(dilate(r, n)); });
    total += r_rule.weights[i] * shell * std::pow(r, Q - 1);
  }
  if (!std::isfinite(total)) throw std::domain_error("polar_integrate: non-finite result");
  return total;
}

}  // namespace koranyi
