#include "koranyi/squarefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "koranyi/parallel.hpp"
#include "koranyi/quadrature.hpp"
#include "koranyi/special.hpp"

namespace koranyi {

namespace {

double lambda_max(const SphericalParam& p) {
  double m = 0.0;
  for (double x : p.lambda) m = std::max(m, x);
  return m;
}

// Upper estimate of the oscillation frequency of s -> <mu_s, phi>.
double local_frequency(const SphericalParam& p, double s) {
  double lag = 0.0;
  for (int k = 0; k < p.dims.vprime; ++k) lag = std::max(lag, p.lambda[k] * (p.l[k] + 1));
  return 2.0 * s * (p.d2_norm() + lag) + p.r;
}

template <class F>
std::pair<double, double> gauss_kronrod15(F&& f, double a, double b) {
  static constexpr double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                   0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                   0.207784955007898468, 0.0};
  static constexpr double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                   0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                   0.204432940075298892, 0.209482141084727828};
  static constexpr double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                   0.417959183673469388};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = wk[7] * fc, g = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double f1 = f(c - h * xk[i]), f2 = f(c + h * xk[i]);
    k += wk[i] * (f1 + f2);
    if (i % 2 == 1) g += wg[i / 2] * (f1 + f2);
  }
  return {k * h, std::abs(k - g) * h};
}

}  // namespace

ShatResult shat(const SphericalParam& p, int j, const ShatOptions& opt) {
  if (j < 1 || j > 3) throw std::invalid_argument("shat: j must lie in 1..3");
  ShatResult res;
  res.param = p;
  res.j = j;
  const double top = std::max(std::sqrt(lambda_max(p)), p.r);
  if (!(top > 0.0)) throw std::invalid_argument("shat: parameter has no scale (all lambdas and r vanish)");
  res.scale = 1.0 / top;
  res.s_min = opt.s_min_rel * res.scale;

  auto integrand = [&](double s) {
    const PairingPlan plan = make_pairing_plan(p, s, opt.plan);
    if (plan.capped) res.capped = true;
    ++res.evaluations;
    const double d = pairing_derivs(plan, s, j)[j];
    return d * d * std::pow(s, 2 * j - 1);
  };
  double running = 0.0;
  // Adaptive Gauss-Kronrod on [a, b]; the tolerance follows the running total.
  auto adapt = [&](auto&& self, double a, double b, int depth) -> double {
    const auto [k, err] = gauss_kronrod15(integrand, a, b);
    if (err <= opt.rel_tol * std::max(running + std::abs(k), 1e-300) || depth >= opt.max_depth) return k;
    const double m = 0.5 * (a + b);
    return self(self, a, m, depth + 1) + self(self, m, b, depth + 1);
  };
  auto octave = [&](double a) {
    const double b = 2.0 * a;
    const double width = opt.panel_phase / local_frequency(p, b);
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) acc += adapt(adapt, a + h * k, a + h * (k + 1), 0);
    running += acc;
    return acc;
  };

  std::vector<double> oct;
  double a = res.s_min;
  double body = 0.0;
  bool decayed = false;
  const int max_oct = static_cast<int>(std::log2(1.0 / opt.s_min_rel) + opt.max_octaves);
  for (int k = 0; k < max_oct; ++k) {
    const double I = octave(a);
    oct.push_back(I);
    body += I;
    a *= 2.0;
    if (a > 2.0 * res.scale && oct.size() >= 3) {
      const double last = oct.back();
      const double prev = oct[oct.size() - 2];
      if (last <= opt.octave_stop * body && last < prev) {
        decayed = true;
        break;
      }
    }
  }
  res.s_max = a;

  std::ostringstream diag;
  // Small s: a power law C s^e on [0, s_min] is pinned by the first two octaves.
  if (oct.size() >= 2 && oct[0] > 0.0) {
    if (oct[1] > oct[0]) {
      res.tail_small = oct[0] * oct[0] / (oct[1] - oct[0]);
    } else {
      res.tail_small = std::numeric_limits<double>::infinity();
      diag << "integrand not integrable at s -> 0; ";
    }
  }
  // Large s: geometric decay of the octave contributions.
  if (oct.size() >= 2) {
    const double last = oct.back();
    const double prev = oct[oct.size() - 2];
    if (last == 0.0) {
      res.tail_large = 0.0;
    } else if (prev > 0.0 && last < prev) {
      const double q = last / prev;
      res.tail_large = last * q / (1.0 - q);
    } else {
      res.tail_large = std::numeric_limits<double>::infinity();
    }
  }
  if (!decayed) diag << "decay not reached by s_max = " << res.s_max << "; ";
  if (res.capped) diag << "pairing plan hit its panel cap; ";
  res.tail_bound = res.tail_small + res.tail_large;
  res.integral = body + (std::isfinite(res.tail_bound) ? res.tail_bound : 0.0);
  res.value = std::sqrt(res.integral);
  res.ok = decayed && std::isfinite(res.tail_bound) && res.tail_bound < 0.01 * res.integral;
  if (!res.ok && res.tail_bound >= 0.01 * res.integral) diag << "tails exceed 1% of the integral; ";
  res.diagnostic = diag.str();
  return res;
}

ScanGrid ScanGrid::default_grid(int v) {
  ScanGrid g;
  g.v = v;
  const int vp = v / 2;
  if (vp == 1) {
    g.shapes = {{1.0}};
  } else if (vp == 2) {
    g.shapes = {{1.0, 0.5}, {1.0, 0.25}, {1.0, 1.0 / 16.0}};
  } else {
    throw std::invalid_argument("ScanGrid: v must lie in [2, 5]");
  }
  if (v % 2 == 1) g.r_over_sqrt_lambda = {0.5, 2.0};
  return g;
}

std::size_t ScanGrid::size() const {
  const std::size_t vp = static_cast<std::size_t>(v / 2);
  std::size_t ls = 1;
  for (std::size_t k = 0; k < vp; ++k) ls *= l_values.size();
  const std::size_t rs = v % 2 == 1 ? r_over_sqrt_lambda.size() : 1;
  return rungs.size() * shapes.size() * ls * rs;
}

std::vector<SphericalParam> ScanGrid::rung_params(std::size_t rung) const {
  const Dimensions d = Dimensions::of(v);
  const double R = rungs.at(rung);
  std::vector<SphericalParam> out;
  const std::size_t nl = l_values.size();
  const std::size_t combos = d.vprime == 1 ? nl : nl * nl;
  const std::vector<double> rr = d.odd() ? r_over_sqrt_lambda : std::vector<double>{0.0};
  for (const auto& shape : shapes) {
    if (static_cast<int>(shape.size()) != d.vprime) throw std::invalid_argument("ScanGrid: shape length must be floor(v/2)");
    std::vector<double> lam(shape.size());
    if (mode == LadderMode::ray) {
      for (std::size_t k = 0; k < shape.size(); ++k) lam[k] = R * shape[k];
    } else {
      // Smallest lambda pinned at shape.back(); the others scale with the rung.
      for (std::size_t k = 0; k + 1 < shape.size(); ++k) lam[k] = R * shape[k];
      lam.back() = shape.back();
      if (shape.size() == 1) lam.back() = R * shape.back();
    }
    for (double r : rr) {
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<int> l(static_cast<std::size_t>(d.vprime));
        l[0] = l_values[c % nl];
        if (d.vprime == 2) l[1] = l_values[c / nl];
        out.push_back(SphericalParam::make(d, r * std::sqrt(lam[0]), lam, l));
      }
    }
  }
  return out;
}

ScanReport scan_shat(const ScanGrid& grid, int j, const ShatOptions& opt, double band) {
  ScanReport rep;
  rep.v = grid.v;
  rep.j = j;
  rep.mode = grid.mode;
  if (grid.rungs.empty() || grid.shapes.empty() || grid.l_values.empty())
    throw std::invalid_argument("scan_shat: empty grid");
  for (std::size_t k = 0; k < grid.rungs.size(); ++k) {
    double sup = 0.0;
    for (const auto& p : grid.rung_params(k)) {
      ShatResult r = shat(p, j, opt);
      if (!r.ok) rep.all_ok = false;
      sup = std::max(sup, r.value);
      rep.points.push_back(std::move(r));
    }
    rep.rung_sup.push_back(sup);
    rep.sup = std::max(rep.sup, sup);
  }
  for (std::size_t k = 0; k + 1 < rep.rung_sup.size(); ++k)
    rep.ratios.push_back(rep.rung_sup[k] > 0.0 ? rep.rung_sup[k + 1] / rep.rung_sup[k] : 0.0);
  rep.stabilized = true;
  const std::size_t nr = rep.ratios.size();
  for (std::size_t k = nr >= 2 ? nr - 2 : 0; k < nr; ++k)
    if (std::abs(rep.ratios[k] - 1.0) > band) rep.stabilized = false;
  if (!rep.all_ok)
    rep.verdict = "tail failure";
  else
    rep.verdict = rep.stabilized ? "uniformly bounded" : "non-uniform";
  return rep;
}

int half_ceil(int h) { return (h + 1) / 2; }

int chain_power(int j, int h) { return 2 * j + (h % 2); }

int chain_coeff(int h, int j) {
  // h!/(k!(h-2k)!) 2^(h-2k) with k = h - ceil(h/2) - j.
  static constexpr int table[4][2] = {{1, 0}, {2, 0}, {2, 4}, {12, 8}};
  if (h < 0 || h > 3 || j < 0 || j > h / 2) throw std::out_of_range("chain_coeff: need 0 <= j <= h/2, h <= 3");
  return table[h][j];
}

std::complex<double> eval_check_b(const SphericalParam& p, double t, double s, int htilde, int n) {
  if (htilde < 0 || n < 0 || htilde + n > 3) throw std::invalid_argument("eval_check_b: need htilde + n <= 3");
  if (htilde > 0 && !p.dims.odd()) throw std::invalid_argument("eval_check_b: htilde > 0 requires odd v");
  if (!(t >= 0.0 && t <= 1.0) || !(s > 0.0)) throw std::domain_error("eval_check_b: need t in [0,1] and s > 0");
  const PairingPlan plan = make_pairing_plan(p, s);
  return sphere_moments(plan, t, s, htilde + n)[htilde][n];
}

namespace {

void check_indices(const SphericalParam& p, std::array<int, 2> g, std::array<int, 2> jj, int h) {
  const int ht = h - g[0] - g[1];
  if (h < 0 || h > 3 || g[0] < 0 || g[1] < 0 || ht < 0)
    throw std::invalid_argument("eval_b_gj: need h1 + h2 <= h <= 3");
  if (ht > 0 && !p.dims.odd()) throw std::invalid_argument("eval_b_gj: htilde must be 0 when v is even");
  for (int i = 0; i < 2; ++i)
    if (jj[i] < 0 || jj[i] > g[i] / 2) throw std::invalid_argument("eval_b_gj: need 0 <= j_i <= h_i / 2");
}

}  // namespace

std::complex<double> eval_b_gj(const SphericalParam& p, double s, std::array<int, 2> g, std::array<int, 2> jj,
                               int h) {
  check_indices(p, g, jj, h);
  if (!(s > 0.0)) throw std::domain_error("eval_b_gj: s must be positive");
  const int ht = h - g[0] - g[1];
  const int n1 = half_ceil(g[0]) + jj[0];
  const int n2 = half_ceil(g[1]) + jj[1];
  if (ht + n1 > 3 || n2 > kMaxBesselDeriv) throw std::invalid_argument("eval_b_gj: derivative order too high");
  const PairingPlan plan = make_pairing_plan(p, s);
  const double alpha = 0.5 * (p.dims.z - 2);
  const double dn = p.d2_norm();
  const double total = parallel_sum<double>(
      plan.radial.size(),
      [&](std::size_t i) {
        const RadialNode& rn = plan.radial[i];
        const double cb = sphere_moments(plan, rn.t, s, ht + n1)[ht][n1];
        const double kb = rn.c * dn;
        return 0.5 * rn.w * cb * reduced_bessel(alpha, s * s * kb, n2) * std::pow(kb, n2);
      },
      8);
  return total * std::pow(s, chain_power(jj[0], g[0]) + chain_power(jj[1], g[1]));
}

std::complex<double> reconstruct_derivative(const SphericalParam& p, double s, int h) {
  static constexpr double fact[] = {1, 1, 2, 6};
  std::complex<double> acc = 0.0;
  for (int h1 = 0; h1 <= h; ++h1)
    for (int h2 = 0; h1 + h2 <= h; ++h2) {
      const int ht = h - h1 - h2;
      if (ht > 0 && !p.dims.odd()) continue;
      const double multi = fact[h] / (fact[ht] * fact[h1] * fact[h2]);
      for (int j1 = 0; j1 <= h1 / 2; ++j1)
        for (int j2 = 0; j2 <= h2 / 2; ++j2)
          acc += multi * chain_coeff(h1, j1) * chain_coeff(h2, j2) * eval_b_gj(p, s, {h1, h2}, {j1, j2}, h);
    }
  return 2.0 * acc;
}

MajorantReport check_b_majorant(const SphericalParam& p, int htilde, int n, const std::vector<double>& t_grid,
                                const std::vector<double>& s_grid, double slack) {
  MajorantReport rep;
  const double A = p.d2_norm();
  int idx = 0;
  for (double s : s_grid) {
    const PairingPlan plan = make_pairing_plan(p, s);
    for (double t : t_grid) {
      const double cb = std::abs(sphere_moments(plan, t, s, htilde + n)[htilde][n]);
      double sum = 0.0;
      for (int i = 0; i <= htilde; ++i) sum += std::pow(A * s * s * t * t, i);
      const double maj = std::pow(A * t * t, n) * std::pow(s, -htilde) * sum;
      if (!(maj > 0.0)) continue;
      const double ratio = cb / maj;
      double& c = idx++ % 2 == 0 ? rep.c_fit : rep.c_validate;
      c = std::max(c, ratio);
      ++rep.points;
    }
  }
  rep.ok = rep.points > 0 && std::isfinite(rep.c_fit) && rep.c_validate <= rep.c_fit * (1.0 + slack);
  return rep;
}

double check_b_decay_slope(const SphericalParam& p, double t, int htilde, int n, const std::vector<double>& s_grid) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (double s : s_grid) {
    const double val = std::abs(eval_check_b(p, t, s, htilde, n));
    if (!(val > 0.0)) continue;
    const double x = std::log(s), y = std::log(val);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw std::domain_error("check_b_decay_slope: need two nonzero samples");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double bessel_moment(double alpha, int nderiv, double beta, double T) {
  if (!(alpha > 0.0) || !(beta > -1.0)) throw std::invalid_argument("bessel_moment: need alpha > 0, beta > -1");
  if (nderiv < 0 || nderiv > kMaxBesselDeriv) throw std::invalid_argument("bessel_moment: derivative order out of range");
  if (T <= 0.0) return 0.0;
  const int panels = std::max(4, static_cast<int>(std::ceil(T / 1.5)));
  const Rule1D g = gauss_legendre(10, 0.0, 1.0);
  const double h = T / panels;
  return parallel_sum<double>(
      static_cast<std::size_t>(panels),
      [&](std::size_t k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double s = h * (k + g.nodes[i]);
          const double jv = reduced_bessel(alpha, s, nderiv);
          acc += g.weights[i] * jv * jv * std::pow(s, beta);
        }
        return h * acc;
      },
      16);
}

double bessel_moment_tail(double alpha, int nderiv, double beta, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("bessel_moment_tail: T must be positive");
  const double gamma = beta - 2.0 * alpha - 1.0;
  if (gamma >= -1.0) return std::numeric_limits<double>::infinity();
  // J^(n)(s) ~ C s^(-alpha-1/2) cos(s - alpha pi/2 - pi/4 + n pi/2), C = Gamma(alpha+1) 2^alpha sqrt(2/pi).
  const double C = std::exp(std::lgamma(alpha + 1.0)) * std::pow(2.0, alpha) * std::sqrt(2.0 / std::numbers::pi);
  const double w = T - 0.5 * alpha * std::numbers::pi - 0.25 * std::numbers::pi + 0.5 * nderiv * std::numbers::pi;
  // cos^2 = (1 + cos 2w) / 2; the oscillating half integrates to -sin(2w(T)) T^gamma / 2 at leading order.
  const double mean = 0.5 * C * C * std::pow(T, gamma + 1.0) / -(gamma + 1.0);
  const double osc = -0.25 * C * C * std::sin(2.0 * w) * std::pow(T, gamma);
  return mean + osc;
}

}  // namespace koranyi
