#include "koranyi/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "koranyi/parallel.hpp"
#include "koranyi/special.hpp"

namespace koranyi {

SphericalParam SphericalParam::make(Dimensions dims, double r, std::vector<double> lambda, std::vector<int> l) {
  if (lambda.size() != static_cast<std::size_t>(dims.vprime) || l.size() != static_cast<std::size_t>(dims.vprime))
    throw std::invalid_argument("SphericalParam: lambda and l must have length floor(v/2)");
  if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("SphericalParam: r must be finite and >= 0");
  if (!dims.odd() && r != 0.0) throw std::invalid_argument("SphericalParam: r must be 0 when v is even");
  for (double x : lambda)
    if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("SphericalParam: lambdas must be finite and >= 0");
  for (int k : l)
    if (k < 0) throw std::invalid_argument("SphericalParam: l entries must be >= 0");
  SphericalParam p;
  p.dims = dims;
  p.r = r;
  p.lambda = std::move(lambda);
  p.l = std::move(l);
  return p;
}

bool SphericalParam::in_parameter_set() const {
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (!(lambda[j] > 0.0)) return false;
    if (j > 0 && !(lambda[j - 1] > lambda[j])) return false;
  }
  return dims.odd() ? r > 0.0 : r == 0.0;
}

double SphericalParam::d2_norm() const {
  double s = 0.0;
  for (double x : lambda) s += x * x;
  return std::sqrt(s);
}

SphericalParam SphericalParam::scaled(double t) const {
  SphericalParam q = *this;
  q.r *= t;
  for (auto& x : q.lambda) x *= t * t;
  return q;
}

std::string SphericalParam::describe() const {
  std::ostringstream os;
  os << "v=" << dims.v << " r=" << r << " lambda=(";
  for (std::size_t j = 0; j < lambda.size(); ++j) os << (j ? "," : "") << lambda[j];
  os << ") l=(";
  for (std::size_t j = 0; j < l.size(); ++j) os << (j ? "," : "") << l[j];
  os << ")";
  return os.str();
}

std::vector<double> d2_coords(const SphericalParam& p) {
  std::vector<double> a(static_cast<std::size_t>(p.dims.z), 0.0);
  for (int j = 0; j < p.dims.vprime; ++j) a[pair_index(p.dims.v, 2 * j, 2 * j + 1)] = p.lambda[j];
  return a;
}

std::array<double, 2> proj_pair(std::span<const double> x, int j, Dimensions dims) {
  if (x.size() != static_cast<std::size_t>(dims.v)) throw std::invalid_argument("proj_pair: vector must have length v");
  if (j < 1 || j > dims.vprime) throw std::out_of_range("proj_pair: j must lie in 1..floor(v/2)");
  return {x[2 * j - 2], x[2 * j - 1]};
}

std::complex<double> theta_eval(const SphericalParam& p, const GroupElement& n) {
  const Dimensions d = p.dims;
  if (!(n.dims() == d)) throw std::invalid_argument("theta_eval: dimension mismatch");
  const auto x = n.x();
  const auto a = n.a();
  double phase = d.odd() ? p.r * x[d.v - 1] : 0.0;
  double mod = 1.0;
  for (int j = 0; j < d.vprime; ++j) {
    phase += p.lambda[j] * a[pair_index(d.v, 2 * j, 2 * j + 1)];
    const double q = x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1];
    mod *= laguerre_fn(p.l[j], 0.5 * p.lambda[j] * q);
  }
  return std::polar(1.0, phase) * mod;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct MomentSum {
  std::complex<double> s1;
  double s2 = 0.0;
  MomentSum& operator+=(const MomentSum& o) {
    s1 += o.s1;
    s2 += o.s2;
    return *this;
  }
};

}  // namespace

McValue phi_eval(const SphericalParam& p, const GroupElement& n, int n_haar, std::uint64_t seed) {
  if (n_haar < 100) throw std::invalid_argument("phi_eval: need at least 100 Haar samples");
  const auto total = parallel_sum<MomentSum>(
      static_cast<std::size_t>(n_haar),
      [&](std::size_t i) {
        std::mt19937_64 rng(splitmix(seed ^ splitmix(i)));
        const Matrix k = haar_orthogonal_sample(p.dims.v, rng);
        const auto val = theta_eval(p, orthogonal_act(k, n));
        return MomentSum{val, std::norm(val)};
      },
      64);
  McValue out;
  out.samples = n_haar;
  out.value = total.s1 / static_cast<double>(n_haar);
  const double var = std::max(0.0, (total.s2 - n_haar * std::norm(out.value)) / (n_haar - 1.0));
  out.std_error = std::sqrt(var / n_haar);
  return out;
}

namespace {

// Past this argument |l_n(x)| stays below 1e-18 (bound e^{-x/2} x^n / n!,
// which dominates |L_n(x)| e^{-x/2} for x > 4n + 2).
double laguerre_cutoff(int n) {
  double x = 4.0 * n + 2.0;
  const double lf = std::lgamma(n + 1.0);
  while (-0.5 * x + n * std::log(x) - lf > std::log(1e-18)) x += 1.0;
  return x;
}

// Breakpoints in x for a function like l_n(x): geometric from 0.5, steps
// capped by 6 and by the local oscillation length of l_n.
std::vector<double> laguerre_breaks(int n, double x_end) {
  std::vector<double> b;
  double x = 0.5;
  while (x < x_end) {
    b.push_back(x);
    double dx = std::min(x, 6.0);
    if (n > 0) dx = std::min(dx, 1.5 * std::numbers::pi * std::sqrt((x + 1.0) / (n + 1.0)));
    x += dx;
  }
  return b;
}

// Gauss nodes on [lo, hi] cut at the given breakpoints.
void panels_to_nodes(std::vector<double> br, double lo, double hi, int m, int max_panels, bool& capped,
                     std::vector<double>& nodes, std::vector<double>& weights) {
  br.push_back(lo);
  br.push_back(hi);
  std::sort(br.begin(), br.end());
  std::vector<double> clean;
  for (double b : br) {
    if (b < lo || b > hi) continue;
    if (!clean.empty() && b - clean.back() < 1e-12 * (hi - lo)) continue;
    clean.push_back(b);
  }
  if (clean.back() < hi) clean.push_back(hi);
  if (static_cast<int>(clean.size()) - 1 > max_panels) {
    capped = true;
    std::vector<double> thin;
    const double stride = static_cast<double>(clean.size() - 1) / max_panels;
    for (int k = 0; k <= max_panels; ++k)
      thin.push_back(clean[std::min(clean.size() - 1, static_cast<std::size_t>(std::llround(k * stride)))]);
    clean = std::move(thin);
  }
  const Rule1D g = gauss_legendre(m, 0.0, 1.0);
  for (std::size_t k = 0; k + 1 < clean.size(); ++k) {
    const double a = clean[k];
    const double h = clean[k + 1] - a;
    if (h <= 0.0) continue;
    for (std::size_t i = 0; i < g.size(); ++i) {
      nodes.push_back(a + h * g.nodes[i]);
      weights.push_back(h * g.weights[i]);
    }
  }
}

void add_uniform(std::vector<double>& br, double lo, double hi, double step, int cap) {
  if (!(step > 0.0)) return;
  const double count = (hi - lo) / step;
  if (count > cap) step = (hi - lo) / cap;
  for (double x = lo + step; x < hi; x += step) br.push_back(x);
}

// Breakpoints near q = 0 for g(a q) with g like l_n, q in [0, 1].
void add_graded(std::vector<double>& br, double a, int n, double x_end, bool mirror) {
  if (a <= 0.5) return;
  for (double x : laguerre_breaks(n, std::min(a, x_end))) {
    const double q = x / a;
    if (q >= 1.0) break;
    br.push_back(mirror ? 1.0 - q : q);
  }
  if (x_end < a) br.push_back(mirror ? 1.0 - x_end / a : x_end / a);
}

}  // namespace

PairingPlan make_pairing_plan(const SphericalParam& p, double s, const PlanOptions& opt) {
  const Dimensions d = p.dims;
  if (d.v < 2 || d.v > 5) throw std::invalid_argument("make_pairing_plan: reduced sphere integral supports v in [2, 5]");
  if (!(s > 0.0)) throw std::invalid_argument("make_pairing_plan: s must be positive");
  PairingPlan plan;
  plan.param = p;
  plan.s_ref = s;
  const int m = opt.points_per_panel;
  const int vp = d.vprime;
  // Slightly wider than s so that stencils around s stay resolved.
  const double sw = 1.05 * s;
  const double s2 = sw * sw;
  const double dn = p.d2_norm();

  std::array<double, 2> x_end{};
  double lam_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < vp; ++j) {
    x_end[j] = laguerre_cutoff(p.l[j] + 3);
    lam_min = std::min(lam_min, p.lambda[j]);
  }
  // With v even every direction of X is damped by some Laguerre factor.
  double t_cut = 1.0;
  if (!d.odd() && lam_min > 0.0) {
    double xe = 0.0;
    for (int j = 0; j < vp; ++j) xe = std::max(xe, x_end[j]);
    t_cut = std::min(1.0, std::sqrt(2.0 * xe / (lam_min * s2)));
  }

  // Radial nodes.
  {
    const double uc = 0.5;
    const double tc = std::pow(1.0 - uc * uc, 0.25);
    std::vector<double> tb, ub;
    for (int j = 0; j < vp; ++j) {
      if (p.lambda[j] <= 0.0) continue;
      for (double x : laguerre_breaks(p.l[j] + 1, x_end[j])) tb.push_back(std::sqrt(2.0 * x / (p.lambda[j] * s2)));
    }
    const double phase = s2 * dn;  // Bessel argument at t = 0
    // Bessel argument is phase * u with u = sqrt(1-t^4); a panel per 2 pi.
    std::vector<double> pu;
    add_uniform(pu, 0.0, 1.0, 2.0 * std::numbers::pi / std::max(phase, 1e-300), opt.max_panels);
    for (double u : pu) {
      if (u < uc)
        ub.push_back(u);
      else
        tb.push_back(std::pow(1.0 - u * u, 0.25));
    }
    if (d.odd() && p.r > 0.0) add_uniform(tb, 0.0, 1.0, 2.0 * std::numbers::pi / (sw * p.r), opt.max_panels);
    add_uniform(tb, 0.0, tc, 0.125, 64);
    add_uniform(ub, 0.0, uc, 0.125, 64);

    std::vector<double> tn, tw;
    const double t_hi = std::min(tc, t_cut);
    panels_to_nodes(tb, 0.0, t_hi, m, opt.max_panels, plan.capped, tn, tw);
    for (std::size_t i = 0; i < tn.size(); ++i) {
      const double t = tn[i];
      const double t4 = t * t * t * t;
      plan.radial.push_back({t, std::sqrt(1.0 - t4), 2.0 * std::pow(t, d.v - 1) * std::pow(1.0 - t4, 0.5 * (d.z - 2)) * tw[i]});
    }
    if (t_cut > tc) {
      for (double t : tb)
        if (t > tc && t < t_cut) ub.push_back(std::sqrt(1.0 - t * t * t * t));
      const double u_lo = t_cut < 1.0 ? std::sqrt(1.0 - std::pow(t_cut, 4)) : 0.0;
      std::vector<double> un, uw;
      panels_to_nodes(ub, u_lo, uc, m, opt.max_panels, plan.capped, un, uw);
      for (std::size_t i = un.size(); i-- > 0;) {
        const double u = un[i];
        const double t = std::pow(1.0 - u * u, 0.25);
        plan.radial.push_back({t, u, std::pow(t, d.v - 1) * std::pow(u, d.z - 1) * std::pow(1.0 - u * u, -0.75) * uw[i]});
      }
    }
  }

  // Reduced sphere nodes.
  const double t_top = std::min(1.0, t_cut);
  std::array<double, 2> amax{};
  for (int j = 0; j < vp; ++j) amax[j] = 0.5 * p.lambda[j] * s2 * t_top * t_top;

  auto simplex_rule = [&](std::vector<double>& pn, std::vector<double>& pw) {
    std::vector<double> br;
    add_graded(br, amax[0], p.l[0] + 3, x_end[0], false);
    add_graded(br, amax[1], p.l[1] + 3, x_end[1], true);
    add_uniform(br, 0.0, 1.0, 0.125, 8);
    panels_to_nodes(br, 0.0, 1.0, m, opt.max_panels, plan.capped, pn, pw);
  };
  auto y_rule = [&](std::vector<double>& yn, std::vector<double>& yw) {
    std::vector<double> br;
    // Near y = 1 the arguments behave like 2 a (1 - y).
    add_graded(br, 2.0 * amax[0], p.l[0] + 3, x_end[0], true);
    if (vp > 1) add_graded(br, 2.0 * amax[1], p.l[1] + 3, x_end[1], true);
    if (p.r > 0.0) add_uniform(br, 0.0, 1.0, 2.0 * std::numbers::pi / (sw * p.r), opt.max_panels);
    add_uniform(br, 0.0, 1.0, 0.125, 8);
    panels_to_nodes(br, 0.0, 1.0, m, opt.max_panels, plan.capped, yn, yw);
  };

  switch (d.v) {
    case 2:
      plan.xnodes.push_back({{1.0, 0.0}, 0.0, 1.0});
      break;
    case 3: {
      // x_3 is uniform on [-1, 1].
      std::vector<double> yn, yw;
      y_rule(yn, yw);
      for (std::size_t i = 0; i < yn.size(); ++i) plan.xnodes.push_back({{1.0 - yn[i] * yn[i], 0.0}, yn[i], yw[i]});
      break;
    }
    case 4: {
      std::vector<double> pn, pw;
      simplex_rule(pn, pw);
      for (std::size_t i = 0; i < pn.size(); ++i) plan.xnodes.push_back({{pn[i], 1.0 - pn[i]}, 0.0, pw[i]});
      break;
    }
    case 5: {
      // |x_5| has density (3/2)(1 - y^2); given it, |pr_1 X|^2 is uniform on [0, 1 - y^2].
      std::vector<double> yn, yw, pn, pw;
      y_rule(yn, yw);
      simplex_rule(pn, pw);
      for (std::size_t i = 0; i < yn.size(); ++i) {
        const double R = 1.0 - yn[i] * yn[i];
        for (std::size_t k = 0; k < pn.size(); ++k)
          plan.xnodes.push_back({{R * pn[k], R * (1.0 - pn[k])}, yn[i], 1.5 * R * yw[i] * pw[k]});
      }
      break;
    }
    default:
      break;
  }
  return plan;
}

namespace {

// k! / (i! (k-2i)!) (2s)^(k-2i) summed against f^(k-i): d^k/ds^k f(s^2).
void chain_s2(const double* f, double s, int max_k, double* out) {
  static constexpr double fact[] = {1, 1, 2, 6, 24, 120, 720};
  for (int k = 0; k <= max_k; ++k) {
    double acc = 0.0;
    for (int i = 0; 2 * i <= k; ++i)
      acc += fact[k] / (fact[i] * fact[k - 2 * i]) * std::pow(2.0 * s, k - 2 * i) * f[k - i];
    out[k] = acc;
  }
}

}  // namespace

SphereMoments sphere_moments(const PairingPlan& plan, double t, double s, int max_order) {
  if (max_order < 0 || max_order > 3) throw std::invalid_argument("sphere_moments: order must lie in 0..3");
  const SphericalParam& p = plan.param;
  const int vp = p.dims.vprime;
  const double s2 = s * s;
  const bool osc = p.dims.odd() && p.r != 0.0;
  const int H = max_order;
  static constexpr double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  std::array<double, 2> cut{};
  for (int j = 0; j < vp; ++j) cut[j] = laguerre_cutoff(p.l[j] + 3);

  SphereMoments M{};
  double lag[2][4];
  double kap[2];
  for (const XNode& xn : plan.xnodes) {
    bool dead = false;
    for (int j = 0; j < vp; ++j) {
      kap[j] = 0.5 * p.lambda[j] * t * t * xn.w[j];
      const double x = kap[j] * s2;
      if (x > cut[j]) {
        dead = true;
        break;
      }
      laguerre_fn_derivs(p.l[j], x, H, std::span<double>(lag[j], 4));
    }
    if (dead) continue;
    double fl[4];
    for (int n = 0; n <= H; ++n) {
      if (vp == 1) {
        fl[n] = std::pow(kap[0], n) * lag[0][n];
      } else {
        double acc = 0.0;
        for (int n1 = 0; n1 <= n; ++n1)
          acc += binom[n][n1] * std::pow(kap[0], n1) * lag[0][n1] * std::pow(kap[1], n - n1) * lag[1][n - n1];
        fl[n] = acc;
      }
    }
    if (!osc) {
      for (int n = 0; n <= H; ++n) M[0][n] += xn.weight * fl[n];
    } else {
      const double om = t * p.r * xn.y;
      double pw = 1.0;
      for (int a = 0; a <= H; ++a) {
        const double e = pw * std::cos(om * s + 0.5 * a * std::numbers::pi);
        for (int n = 0; a + n <= H; ++n) M[a][n] += xn.weight * e * fl[n];
        pw *= om;
      }
    }
  }
  return M;
}

std::array<double, 4> pairing_derivs(const PairingPlan& plan, double s, int max_deriv) {
  if (max_deriv < 0 || max_deriv > 3) throw std::invalid_argument("pairing_derivs: order must lie in 0..3");
  const SphericalParam& p = plan.param;
  const double alpha = 0.5 * (p.dims.z - 2);
  const double dn = p.d2_norm();
  const double s2 = s * s;
  const int H = max_deriv;

  struct Acc {
    std::array<double, 4> v{};
    Acc& operator+=(const Acc& o) {
      for (int i = 0; i < 4; ++i) v[i] += o.v[i];
      return *this;
    }
  };

  const auto total = parallel_sum<Acc>(
      plan.radial.size(),
      [&](std::size_t ti) {
        const RadialNode& rn = plan.radial[ti];
        // Bessel factor as a function of s' = s^2, then of s.
        std::array<double, kMaxBesselDeriv + 1> jb{};
        const double kb = rn.c * dn;
        reduced_bessel_derivs(alpha, s2 * kb, H, jb);
        double fb[4], sb[4];
        double kp = 1.0;
        for (int n = 0; n <= H; ++n) {
          fb[n] = kp * jb[n];
          kp *= kb;
        }
        chain_s2(fb, s, H, sb);

        const SphereMoments raw = sphere_moments(plan, rn.t, s, H);
        double M[4][4] = {};
        for (int a = 0; a <= H; ++a) chain_s2(raw[a].data(), s, H - a, M[a]);

        Acc out;
        static constexpr double fact[] = {1, 1, 2, 6};
        for (int h = 0; h <= H; ++h) {
          double acc = 0.0;
          for (int a = 0; a <= h; ++a)
            for (int b = 0; a + b <= h; ++b) {
              const int c = h - a - b;
              acc += fact[h] / (fact[a] * fact[b] * fact[c]) * M[a][b] * sb[c];
            }
          out.v[h] = rn.w * acc;
        }
        return out;
      },
      8);
  return total.v;
}

std::complex<double> pairing_mu_s_phi(const SphericalParam& p, double s) {
  if (!(s > 0.0)) throw std::domain_error("pairing_mu_s_phi: s must be positive");
  return pairing_derivs(make_pairing_plan(p, s), s, 0)[0];
}

std::complex<double> pairing_mu_s_phi(const SphericalParam& p, double s, const std::vector<RadialNode>& t_rule,
                                      const SphereRule& xsphere) {
  const Dimensions d = p.dims;
  if (!(s > 0.0)) throw std::domain_error("pairing_mu_s_phi: s must be positive");
  if (xsphere.n != d.v) throw std::invalid_argument("pairing_mu_s_phi: sphere rule must live in R^v");
  const double alpha = 0.5 * (d.z - 2);
  const double dn = p.d2_norm();
  std::complex<double> total = 0.0;
  for (const auto& rn : t_rule) {
    const double t = rn.t;
    const auto inner = sphere_integrate(xsphere, [&](std::span<const double> X) {
      double mod = 1.0;
      for (int j = 0; j < d.vprime; ++j) {
        const double q = X[2 * j] * X[2 * j] + X[2 * j + 1] * X[2 * j + 1];
        mod *= laguerre_fn(p.l[j], 0.5 * p.lambda[j] * s * s * t * t * q);
      }
      const double ph = d.odd() ? t * s * p.r * X[d.v - 1] : 0.0;
      return std::polar(mod, ph);
    });
    total += rn.w * inner.value * reduced_bessel(alpha, s * s * rn.c * dn);
  }
  return total;
}

std::complex<double> pairing_derivative(const SphericalParam& p, double s, int j, DerivMethod method,
                                        double step_rel) {
  if (j < 0 || j > 3) throw std::invalid_argument("pairing_derivative: order must lie in 0..3");
  if (!(s > 0.0)) throw std::domain_error("pairing_derivative: s must be positive");
  const PairingPlan plan = make_pairing_plan(p, s);
  if (method == DerivMethod::analytic || j == 0) return pairing_derivs(plan, s, j)[j];
  // Local frequency of s -> <mu_s, phi>: Bessel phase, Laguerre oscillation, x_v phase.
  double lag = 0.0;
  for (int k = 0; k < p.dims.vprime; ++k) lag = std::max(lag, p.lambda[k] * (p.l[k] + 1));
  const double omega = 1.0 / s + 2.0 * s * (p.d2_norm() + lag) + p.r;
  const double h = step_rel / omega;
  auto stencil = [&](double hh) {
    double f[5];
    for (int k = -2; k <= 2; ++k) f[k + 2] = pairing_derivs(plan, s + k * hh, 0)[0];
    switch (j) {
      case 1:
        return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * hh);
      case 2:
        return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * hh * hh);
      default:
        return (-f[0] + 2.0 * f[1] - 2.0 * f[3] + f[4]) / (2.0 * hh * hh * hh);
    }
  };
  if (j < 3) return stencil(h);
  // The third-derivative stencil is only second order; one Richardson step.
  return (4.0 * stencil(h) - stencil(2.0 * h)) / 3.0;
}

}  // namespace koranyi
