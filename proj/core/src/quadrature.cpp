#include "koranyi/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "koranyi/special.hpp"

namespace koranyi {

Rule1D gauss_legendre(int npts, double lo, double hi) {
  if (npts < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  Rule1D r;
  r.lo = lo;
  r.hi = hi;
  r.nodes.resize(static_cast<std::size_t>(npts));
  r.weights.resize(static_cast<std::size_t>(npts));
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const int m = (npts + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= npts; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = npts * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= npts; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = npts * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = mid - half * x;
    r.nodes[npts - 1 - i] = mid + half * x;
    r.weights[i] = r.weights[npts - 1 - i] = half * w;
  }
  if (npts % 2 == 1) r.nodes[m - 1] = mid;
  return r;
}

Rule1D composite_gauss_legendre(int npts, int panels, double lo, double hi) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: need at least one panel");
  Rule1D r;
  r.lo = lo;
  r.hi = hi;
  const Rule1D base = gauss_legendre(npts, 0.0, 1.0);
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t i = 0; i < base.size(); ++i) {
      r.nodes.push_back(lo + h * (p + base.nodes[i]));
      r.weights.push_back(h * base.weights[i]);
    }
  return r;
}

Rule1D gauss_gegenbauer(int npts, double expo) {
  if (npts < 1) throw std::invalid_argument("gauss_gegenbauer: need at least one point");
  if (!(expo > -1.0)) throw std::invalid_argument("gauss_gegenbauer: exponent must exceed -1");
  if (expo == 0.0) {
    Rule1D r = gauss_legendre(npts, -1.0, 1.0);
    for (auto& w : r.weights) w *= 0.5;
    return r;
  }
  // Monic recurrence p_{k+1} = x p_k - beta_k p_{k-1} for the weight
  // (1-x^2)^(lam-1/2).
  const double lam = expo + 0.5;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(npts, npts);
  for (int k = 1; k < npts; ++k) {
    const double beta = k == 1 ? 1.0 / (2.0 * (1.0 + lam)) : k * (k + 2.0 * lam - 1.0) / (4.0 * (k + lam) * (k + lam - 1.0));
    J(k, k - 1) = J(k - 1, k) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule1D r;
  r.lo = -1.0;
  r.hi = 1.0;
  for (int i = 0; i < npts; ++i) {
    r.nodes.push_back(es.eigenvalues()(i));
    const double v0 = es.eigenvectors()(0, i);
    r.weights.push_back(v0 * v0);
  }
  // Symmetrise to remove eigen-solver noise.
  for (int i = 0; i < npts / 2; ++i) {
    const int j = npts - 1 - i;
    const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
    const double w = 0.5 * (r.weights[i] + r.weights[j]);
    r.nodes[i] = -x;
    r.nodes[j] = x;
    r.weights[i] = r.weights[j] = w;
  }
  if (npts % 2 == 1) r.nodes[npts / 2] = 0.0;
  double tot = 0.0;
  for (double w : r.weights) tot += w;
  for (auto& w : r.weights) w /= tot;
  return r;
}

std::string to_string(SphereRuleKind k) {
  switch (k) {
    case SphereRuleKind::exact:
      return "exact";
    case SphereRuleKind::product:
      return "product";
    case SphereRuleKind::monte_carlo:
      return "monte-carlo";
    case SphereRuleKind::zonal:
      return "zonal";
  }
  return "unknown";
}

SphereRuleKind sphere_rule_kind_from_string(const std::string& s) {
  if (s == "exact") return SphereRuleKind::exact;
  if (s == "product") return SphereRuleKind::product;
  if (s == "monte-carlo" || s == "mc") return SphereRuleKind::monte_carlo;
  if (s == "zonal") return SphereRuleKind::zonal;
  throw std::invalid_argument("unknown sphere rule kind: " + s);
}

std::size_t SphereRule::size() const {
  if (kind != SphereRuleKind::product) return weights.size();
  std::size_t s = static_cast<std::size_t>(circle_points);
  for (const auto& l : levels) s *= l.size();
  return s;
}

void SphereRule::materialize(std::vector<double>& pts, std::vector<double>& w) const {
  pts.clear();
  w.clear();
  pts.reserve(size() * static_cast<std::size_t>(n));
  w.reserve(size());
  for_each([&](std::span<const double> y, double wt) {
    pts.insert(pts.end(), y.begin(), y.end());
    w.push_back(wt);
  });
}

namespace {

SphereRule exact_rule(int n, int m) {
  SphereRule r;
  r.n = n;
  r.kind = SphereRuleKind::exact;
  if (n == 1) {
    r.points = {1.0, -1.0};
    r.weights = {0.5, 0.5};
    return r;
  }
  r.circle_points = m;
  for (int c = 0; c < m; ++c) {
    const double th = 2.0 * std::numbers::pi * c / m;
    r.points.push_back(std::cos(th));
    r.points.push_back(std::sin(th));
    r.weights.push_back(1.0 / m);
  }
  return r;
}

}  // namespace

SphereRule product_sphere_rule(int n, int k) {
  if (n < 1) throw std::invalid_argument("sphere rule: ambient dimension must be >= 1");
  if (k < 1) throw std::invalid_argument("sphere rule: need at least one point per level");
  if (n <= 2) return exact_rule(n, 2 * k);
  SphereRule r;
  r.n = n;
  r.kind = SphereRuleKind::product;
  r.level_points = k;
  r.circle_points = 2 * k;
  for (int m = n; m >= 3; --m) r.levels.push_back(gauss_gegenbauer(k, 0.5 * (m - 3)));
  return r;
}

SphereRule monte_carlo_sphere_rule(int n, int samples, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sphere rule: ambient dimension must be >= 1");
  if (samples < 2) throw std::invalid_argument("sphere rule: Monte-Carlo needs at least two samples");
  SphereRule r;
  r.n = n;
  r.kind = SphereRuleKind::monte_carlo;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int s = 0; s < samples; ++s) {
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (auto& c : y) {
        c = normal(rng);
        nrm += c * c;
      }
    } while (nrm == 0.0);
    nrm = std::sqrt(nrm);
    for (double c : y) r.points.push_back(c / nrm);
    r.weights.push_back(1.0 / samples);
  }
  return r;
}

SphereRule zonal_sphere_rule(std::span<const double> axis, int npts) {
  const int n = static_cast<int>(axis.size());
  if (n < 2) throw std::invalid_argument("zonal rule: ambient dimension must be >= 2");
  double nrm = 0.0;
  for (double c : axis) nrm += c * c;
  nrm = std::sqrt(nrm);
  if (nrm == 0.0) throw std::invalid_argument("zonal rule: zero axis");
  std::vector<double> e(axis.begin(), axis.end());
  for (auto& c : e) c /= nrm;
  // A unit vector orthogonal to e.
  std::vector<double> f(static_cast<std::size_t>(n), 0.0);
  int piv = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(e[i]) < std::abs(e[piv])) piv = i;
  f[piv] = 1.0;
  double d = e[piv];
  double fn = 0.0;
  for (int i = 0; i < n; ++i) {
    f[i] -= d * e[i];
    fn += f[i] * f[i];
  }
  fn = std::sqrt(fn);
  for (auto& c : f) c /= fn;

  SphereRule r;
  r.n = n;
  r.kind = SphereRuleKind::zonal;
  r.axis = e;
  const Rule1D g = gauss_gegenbauer(npts, 0.5 * (n - 3));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = g.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int k = 0; k < n; ++k) r.points.push_back(u * e[k] + s * f[k]);
    r.weights.push_back(g.weights[i]);
  }
  return r;
}

SphereRule sphere_rule(int n, int target_points, SphereRuleKind kind, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sphere_rule: n must be >= 2");
  if (target_points < 1) throw std::invalid_argument("sphere_rule: need at least one point");
  switch (kind) {
    case SphereRuleKind::exact:
      if (n != 2) throw std::invalid_argument("sphere_rule: exact rules exist for n = 2 only");
      return exact_rule(2, target_points);
    case SphereRuleKind::monte_carlo:
      return monte_carlo_sphere_rule(n, target_points, seed);
    case SphereRuleKind::zonal: {
      std::vector<double> e(static_cast<std::size_t>(n), 0.0);
      e[0] = 1.0;
      return zonal_sphere_rule(e, target_points);
    }
    case SphereRuleKind::product: {
      if (n == 2) return exact_rule(2, target_points);
      // k^(n-2) * 2k ~ target
      int k = static_cast<int>(std::ceil(std::pow(0.5 * target_points, 1.0 / (n - 1))));
      return product_sphere_rule(n, std::max(1, k));
    }
  }
  throw std::invalid_argument("sphere_rule: bad kind");
}

double sphere_mass(Dimensions dims) { return 0.5 * beta_fn(0.25 * dims.v, 0.5 * dims.z); }

double haar_density(Dimensions dims) {
  auto area = [](int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); };
  return 1.0 / (area(dims.v) * area(dims.z));
}

std::vector<RadialNode> radial_nodes(Dimensions dims, int npts, int panels) {
  if (npts < 1 || panels < 1) throw std::invalid_argument("radial_nodes: bad resolution");
  const int v = dims.v;
  const int z = dims.z;
  constexpr double uc = 0.5;
  const double tc = std::pow(1.0 - uc * uc, 0.25);
  std::vector<RadialNode> out;
  out.reserve(static_cast<std::size_t>(2 * npts * panels));
  const Rule1D a = composite_gauss_legendre(npts, panels, 0.0, tc);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a.nodes[i];
    const double t4 = t * t * t * t;
    const double c = std::sqrt(1.0 - t4);
    out.push_back({t, c, 2.0 * std::pow(t, v - 1) * std::pow(1.0 - t4, 0.5 * (z - 2)) * a.weights[i]});
  }
  // t = (1-u^2)^(1/4): 2 t^(v-1) (1-t^4)^((z-2)/2) dt = t^(v-1) u^(z-1) (1-u^2)^(-3/4) du
  const Rule1D b = composite_gauss_legendre(npts, panels, 0.0, uc);
  for (std::size_t i = b.size(); i-- > 0;) {
    const double u = b.nodes[i];
    const double t = std::pow(1.0 - u * u, 0.25);
    out.push_back({t, u, std::pow(t, v - 1) * std::pow(u, z - 1) * std::pow(1.0 - u * u, -0.75) * b.weights[i]});
  }
  return out;
}

KoranyiSphereRule koranyi_sphere_rule(Dimensions dims, std::vector<RadialNode> radial, SphereRule x_rule,
                                      SphereRule z_rule) {
  if (x_rule.n != dims.v || z_rule.n != dims.z)
    throw std::invalid_argument("koranyi_sphere_rule: sphere rules do not match v and z");
  KoranyiSphereRule r;
  r.dims = dims;
  r.radial = std::move(radial);
  r.x_rule = std::move(x_rule);
  r.z_rule = std::move(z_rule);
  double m = 0.0;
  for (const auto& n : r.radial) m += n.w;
  r.total_mass = m;
  return r;
}

KoranyiSphereRule default_koranyi_rule(Dimensions dims, int t_points, int k, int mc_samples, std::uint64_t seed) {
  auto pick = [&](int n, std::uint64_t s) {
    if (n <= 6) return product_sphere_rule(n, k);
    return monte_carlo_sphere_rule(n, mc_samples, s);
  };
  return koranyi_sphere_rule(dims, radial_nodes(dims, t_points), pick(dims.v, seed), pick(dims.z, seed + 1));
}

SpherePoints materialize(const KoranyiSphereRule& rule) {
  SpherePoints p;
  p.dims = rule.dims;
  std::vector<double> xp, xw, zp, zw;
  rule.x_rule.materialize(xp, xw);
  rule.z_rule.materialize(zp, zw);
  const auto v = static_cast<std::size_t>(rule.dims.v);
  const auto z = static_cast<std::size_t>(rule.dims.z);
  for (const auto& rn : rule.radial)
    for (std::size_t i = 0; i < xw.size(); ++i)
      for (std::size_t j = 0; j < zw.size(); ++j) {
        for (std::size_t k = 0; k < v; ++k) p.xs.push_back(rn.t * xp[i * v + k]);
        for (std::size_t k = 0; k < z; ++k) p.as.push_back(rn.c * zp[j * z + k]);
        p.w.push_back(rn.w * xw[i] * zw[j]);
      }
  return p;
}

}  // namespace koranyi
