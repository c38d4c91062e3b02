#include "koranyi/maximal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "koranyi/parallel.hpp"
#include "koranyi/special.hpp"

namespace koranyi {

namespace {

constexpr int kQ = 4;
const Dimensions kD2 = Dimensions::of(2);

struct Offset {
  double x1, x2, a, w;
};

// Interior grid points as flat indices.
std::vector<std::size_t> interior_points(const GridField& g, const Interior& in) {
  std::vector<std::size_t> out;
  const int n = g.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (in.contains(g, i, j, k)) out.push_back(g.index(i, j, k));
  return out;
}

void unflatten(const GridField& g, std::size_t idx, double& x1, double& x2, double& a) {
  const auto n = static_cast<std::size_t>(g.n());
  const int k = static_cast<int>(idx % n);
  const int j = static_cast<int>((idx / n) % n);
  const int i = static_cast<int>(idx / (n * n));
  x1 = g.coord(i);
  x2 = g.coord(j);
  a = g.coord(k);
}

// Sum_s w_s f(n . m_s^{-1}) over the interior, zero elsewhere.
GridField apply_stencil(const GridField& f, const std::vector<Offset>& st, const Interior& in, Interp interp,
                        bool use_abs = false) {
  GridField out(f.n(), f.L());
  const auto pts = interior_points(f, in);
  parallel_for(
      pts.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
          double x1, x2, a;
          unflatten(f, pts[p], x1, x2, a);
          double s = 0.0;
          for (const auto& o : st) {
            const double y1 = x1 - o.x1, y2 = x2 - o.x2;
            const double ya = a - o.a - 0.5 * (x1 * o.x2 - x2 * o.x1);
            double val = interp == Interp::linear ? f.sample(y1, y2, ya) : f.sample_cubic(y1, y2, ya);
            if (use_abs) val = std::abs(val);
            s += o.w * val;
          }
          out.values()[pts[p]] = s;
        }
      },
      64);
  return out;
}

std::vector<Offset> sphere_stencil(const SpherePoints& sp, double t, double scale) {
  std::vector<Offset> st(sp.size());
  for (std::size_t p = 0; p < sp.size(); ++p)
    st[p] = {t * sp.xs[2 * p], t * sp.xs[2 * p + 1], t * t * sp.as[p], scale * sp.w[p]};
  return st;
}

// Lattice of cell centres in the Korányi ball of radius r, spacing r/m in x
// and r^2/m in a, weights weight(|m| / r) times the cell volume.
std::vector<Offset> ball_lattice(double r, int m, const std::function<double(double)>& weight) {
  std::vector<Offset> st;
  const double hx = r / m, ha = r * r / m;
  const double cell = hx * hx * ha;
  for (int i = -m; i < m; ++i)
    for (int j = -m; j < m; ++j)
      for (int k = -m; k < m; ++k) {
        const double x1 = (i + 0.5) * hx, x2 = (j + 0.5) * hx, a = (k + 0.5) * ha;
        const double q = x1 * x1 + x2 * x2;
        const double rho = std::pow(q * q + a * a, 0.25) / r;
        if (rho >= 1.0) continue;
        const double w = weight(rho);
        if (w != 0.0) st.push_back({x1, x2, a, w * cell});
      }
  return st;
}

double cubic_weight(double t, int o) {
  // Catmull-Rom weights for offsets -1, 0, 1, 2 at fractional position t.
  const double t2 = t * t, t3 = t2 * t;
  switch (o) {
    case 0: return 0.5 * (-t3 + 2 * t2 - t);
    case 1: return 0.5 * (3 * t3 - 5 * t2 + 2);
    case 2: return 0.5 * (-3 * t3 + 4 * t2 + t);
    default: return 0.5 * (t3 - t2);
  }
}

}  // namespace

std::complex<double> m_alpha(double r, std::complex<double> alpha, bool* pole) {
  if (!(r >= 0.0)) throw std::domain_error("m_alpha: r must be nonnegative");
  if (pole) *pole = false;
  if (alpha.imag() == 0.0 && alpha.real() <= 0.0 && alpha.real() == std::floor(alpha.real())) {
    if (pole) *pole = true;
    return 0.0;
  }
  if (r >= 1.0) return 0.0;
  const double base = 1.0 - r * r;
  const auto pw = std::exp((alpha - 1.0) * std::log(base));
  return 2.0 * pw / complex_gamma(alpha.real(), alpha.imag());
}

GridField::GridField(int n, double L, double fill) : n_(n), L_(L) {
  if (n < 2) throw std::invalid_argument("GridField: need n >= 2");
  if (!(L > 0.0)) throw std::invalid_argument("GridField: L must be positive");
  values_.assign(static_cast<std::size_t>(n) * n * n, fill);
}

GridField GridField::from_function(int n, double L, const std::function<double(double, double, double)>& f) {
  GridField g(n, L);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) g.at(i, j, k) = f(g.coord(i), g.coord(j), g.coord(k));
  return g;
}

double GridField::sample(double x1, double x2, double a) const {
  const double h = spacing();
  const double u[3] = {(x1 + L_) / h - 0.5, (x2 + L_) / h - 0.5, (a + L_) / h - 0.5};
  int i0[3];
  double fr[3];
  for (int d = 0; d < 3; ++d) {
    if (u[d] <= -1.0 || u[d] >= n_) return 0.0;
    const double fl = std::floor(u[d]);
    i0[d] = static_cast<int>(fl);
    fr[d] = u[d] - fl;
  }
  double s = 0.0;
  for (int di = 0; di < 2; ++di) {
    const int i = i0[0] + di;
    if (i < 0 || i >= n_) continue;
    const double wi = di ? fr[0] : 1.0 - fr[0];
    for (int dj = 0; dj < 2; ++dj) {
      const int j = i0[1] + dj;
      if (j < 0 || j >= n_) continue;
      const double wj = wi * (dj ? fr[1] : 1.0 - fr[1]);
      for (int dk = 0; dk < 2; ++dk) {
        const int k = i0[2] + dk;
        if (k < 0 || k >= n_) continue;
        s += wj * (dk ? fr[2] : 1.0 - fr[2]) * values_[index(i, j, k)];
      }
    }
  }
  return s;
}

double GridField::sample_cubic(double x1, double x2, double a) const {
  const double h = spacing();
  const double u[3] = {(x1 + L_) / h - 0.5, (x2 + L_) / h - 0.5, (a + L_) / h - 0.5};
  int i0[3];
  double w[3][4];
  for (int d = 0; d < 3; ++d) {
    if (u[d] <= -2.0 || u[d] >= n_ + 1) return 0.0;
    const double fl = std::floor(u[d]);
    i0[d] = static_cast<int>(fl) - 1;
    for (int o = 0; o < 4; ++o) w[d][o] = cubic_weight(u[d] - fl, o);
  }
  double s = 0.0;
  for (int di = 0; di < 4; ++di) {
    const int i = i0[0] + di;
    if (i < 0 || i >= n_) continue;
    for (int dj = 0; dj < 4; ++dj) {
      const int j = i0[1] + dj;
      if (j < 0 || j >= n_) continue;
      const double wij = w[0][di] * w[1][dj];
      for (int dk = 0; dk < 4; ++dk) {
        const int k = i0[2] + dk;
        if (k < 0 || k >= n_) continue;
        s += wij * w[2][dk] * values_[index(i, j, k)];
      }
    }
  }
  return s;
}

GridField GridField::abs() const {
  GridField g = *this;
  for (double& x : g.values_) x = std::abs(x);
  return g;
}

bool GridField::finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

bool Interior::contains(const GridField& g, int i, int j, int k) const {
  return std::abs(g.coord(i)) <= half_width && std::abs(g.coord(j)) <= half_width &&
         std::abs(g.coord(k)) <= half_width;
}

std::size_t Interior::count(const GridField& g) const { return interior_points(g, *this).size(); }

RadiiLadder::RadiiLadder(double r0_, double ratio_, int K_) : r0(r0_), ratio(ratio_), K(K_) {
  if (!(r0 > 0.0) || !(ratio > 1.0) || K < 0) throw std::invalid_argument("RadiiLadder: need r0 > 0, ratio > 1, K >= 0");
}

double RadiiLadder::radius(int k) const { return r0 * std::pow(ratio, k); }

std::vector<double> RadiiLadder::radii() const {
  std::vector<double> r;
  for (int k = 0; k <= K; ++k) r.push_back(radius(k));
  return r;
}

void check_margin(const GridField& f, const Interior& in, double radius, const char* who) {
  const double edge = f.L() - 0.5 * f.spacing();
  const double H = in.half_width;
  const double need_x = H + radius;
  const double need_a = H + radius * radius + 0.5 * std::sqrt(2.0) * H * radius;
  if (need_x > edge || need_a > edge)
    throw MarginError(std::string(who) + ": radius " + std::to_string(radius) + " from interior half-width " +
                      std::to_string(H) + " leaves the grid (needs " + std::to_string(std::max(need_x, need_a)) +
                      ", box edge " + std::to_string(edge) + ")");
}

KoranyiSphereRule grid_sphere_rule(int t_points, int circle_points) {
  return koranyi_sphere_rule(kD2, radial_nodes(kD2, t_points), sphere_rule(2, circle_points, SphereRuleKind::exact),
                             product_sphere_rule(1, 1));
}

double RadialKernel::l1_norm(double mu_mass) const {
  const Rule1D r = composite_gauss_legendre(20, 8, 0.0, support);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * profile(r.nodes[i]) * std::pow(r.nodes[i], kQ - 1);
  return mu_mass * s;
}

RadialKernel ball_kernel() {
  const double vol = sphere_mass(kD2) / kQ;
  return {"ball", [vol](double rho) { return rho < 1.0 ? 1.0 / vol : 0.0; }, 1.0};
}

RadialKernel bump_kernel() {
  const double c = 12.0 / sphere_mass(kD2);
  return {"bump", [c](double rho) { return rho < 1.0 ? c * (1.0 - rho * rho) : 0.0; }, 1.0};
}

RadialKernel mollifier_kernel() {
  auto raw = [](double rho) { return rho < 1.0 ? std::exp(-1.0 / (1.0 - rho * rho)) : 0.0; };
  RadialKernel k{"mollifier", raw, 1.0};
  const double m = k.l1_norm(sphere_mass(kD2));
  k.profile = [raw, m](double rho) { return raw(rho) / m; };
  return k;
}

GridField conv_radial_kernel(const GridField& f, const RadialKernel& k, double t, const Interior& in,
                             int stencil_per_radius) {
  if (!(t > 0.0)) throw std::invalid_argument("conv_radial_kernel: t must be positive");
  const double R = k.support * t;
  check_margin(f, in, R, "conv_radial_kernel");
  const double tq = std::pow(t, kQ);
  // lattice in units of R; kernel argument is |m| / t = rho * support
  const double dens = haar_density(kD2);
  auto st = ball_lattice(R, stencil_per_radius, [&](double rho) { return dens * k.profile(rho * k.support) / tq; });
  return apply_stencil(f, st, in, Interp::linear);
}

GridField spherical_average(const GridField& f, double t, const KoranyiSphereRule& rule, const Interior& in,
                            Interp interp) {
  if (!(t >= 0.0)) throw std::invalid_argument("spherical_average: t must be nonnegative");
  if (rule.dims.v != 2) throw std::invalid_argument("spherical_average: grid experiments are on N_2");
  check_margin(f, in, t, "spherical_average");
  const SpherePoints sp = materialize(rule);
  return apply_stencil(f, sphere_stencil(sp, t, 1.0), in, interp);
}

GridField standard_maximal(const GridField& f, const RadiiLadder& ladder, const Interior& in,
                           int stencil_per_radius) {
  check_margin(f, in, ladder.r_max(), "standard_maximal");
  GridField out(f.n(), f.L());
  for (double r : ladder.radii()) {
    auto st = ball_lattice(r, stencil_per_radius, [](double) { return 1.0; });
    double vol = 0.0;
    for (const auto& o : st) vol += o.w;
    for (auto& o : st) o.w /= vol;
    const GridField avg = apply_stencil(f, st, in, Interp::linear, true);
    for (std::size_t i = 0; i < out.values().size(); ++i)
      out.values()[i] = std::max(out.values()[i], avg.values()[i]);
  }
  return out;
}

GridField spherical_maximal(const GridField& f, const RadiiLadder& ladder, const KoranyiSphereRule& rule,
                            const Interior& in) {
  check_margin(f, in, ladder.r_max(), "spherical_maximal");
  const SpherePoints sp = materialize(rule);
  GridField out(f.n(), f.L());
  for (double r : ladder.radii()) {
    const GridField avg = apply_stencil(f, sphere_stencil(sp, r, rule.normalizer()), in, Interp::linear, true);
    for (std::size_t i = 0; i < out.values().size(); ++i)
      out.values()[i] = std::max(out.values()[i], avg.values()[i]);
  }
  return out;
}

namespace {

// S^1 from samples F_i = f*mu_{s_i} on an increasing s-grid.
void accumulate_s1(const std::vector<double>& s, const std::vector<const GridField*>& F, GridField& out,
                   const std::vector<std::size_t>& pts) {
  const std::size_t N = s.size();
  for (std::size_t p : pts) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double d;
      if (i == 0)
        d = (F[1]->values()[p] - F[0]->values()[p]) / (s[1] - s[0]);
      else if (i + 1 == N)
        d = (F[N - 1]->values()[p] - F[N - 2]->values()[p]) / (s[N - 1] - s[N - 2]);
      else
        d = (F[i + 1]->values()[p] - F[i - 1]->values()[p]) / (s[i + 1] - s[i - 1]);
      const double lo = i == 0 ? s[0] : 0.5 * (s[i - 1] + s[i]);
      const double hi = i + 1 == N ? s[N - 1] : 0.5 * (s[i] + s[i + 1]);
      acc += d * d * s[i] * (hi - lo);
    }
    out.values()[p] = std::sqrt(acc);
  }
}

}  // namespace

GridField grid_square_function_s1(const GridField& f, const std::vector<double>& s_grid,
                                  const KoranyiSphereRule& rule, const Interior& in) {
  if (s_grid.size() < 3) throw std::invalid_argument("grid_square_function_s1: need at least 3 s values");
  for (std::size_t i = 0; i < s_grid.size(); ++i)
    if (!(s_grid[i] >= 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1])))
      throw std::invalid_argument("grid_square_function_s1: s-grid must be increasing and nonnegative");
  check_margin(f, in, s_grid.back(), "grid_square_function_s1");
  std::vector<GridField> F;
  for (double s : s_grid) F.push_back(spherical_average(f, s, rule, in));
  std::vector<const GridField*> ptr;
  for (const auto& g : F) ptr.push_back(&g);
  GridField out(f.n(), f.L());
  accumulate_s1(s_grid, ptr, out, interior_points(f, in));
  return out;
}

PointwiseBoundReport pointwise_bound_check(const GridField& f, const RadiiLadder& ladder, int s_steps,
                                           const KoranyiSphereRule& rule, const Interior& in, double eps,
                                           PointwiseBoundFields* fields) {
  const auto t0 = std::chrono::steady_clock::now();
  if (s_steps < 2) throw std::invalid_argument("pointwise_bound_check: need s_steps >= 2");
  const double rmax = ladder.r_max();
  check_margin(f, in, rmax, "pointwise_bound_check");
  const GridField g = f.abs();
  const auto pts = interior_points(g, in);

  std::vector<double> s;
  for (int i = 0; i <= s_steps; ++i) s.push_back(rmax * i / s_steps);
  std::vector<GridField> F;
  for (double si : s) F.push_back(spherical_average(g, si, rule, in));
  std::vector<const GridField*> ptr;
  for (const auto& x : F) ptr.push_back(&x);
  GridField s1(g.n(), g.L());
  accumulate_s1(s, ptr, s1, pts);

  GridField A(g.n(), g.L());
  for (double r : ladder.radii()) {
    const GridField avg = spherical_average(g, r, rule, in);
    for (std::size_t p : pts) A.values()[p] = std::max(A.values()[p], avg.values()[p]);
  }
  const GridField M = standard_maximal(g, ladder, in);

  PointwiseBoundReport rep;
  rep.eps = eps;
  rep.mu_mass = rule.total_mass;
  rep.points = pts.size();
  if (fields) *fields = {GridField(g.n(), g.L()), GridField(g.n(), g.L())};
  for (std::size_t p : pts) {
    const double bound = rep.mu_mass * M.values()[p] + s1.values()[p] / std::sqrt(2.0 * kQ);
    if (fields) {
      fields->lhs.values()[p] = A.values()[p];
      fields->bound.values()[p] = bound;
    }
    const double lhs = A.values()[p];
    if (lhs <= (1.0 + eps) * bound) ++rep.satisfied;
    if (bound > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, lhs / bound);
  }
  rep.fraction = rep.points ? static_cast<double>(rep.satisfied) / rep.points : 1.0;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

double sphere_conv_at(const GridField& f, const GroupElement& n, double t, const KoranyiSphereRule& rule,
                      Interp interp) {
  // Negative t is allowed: the rule is symmetric under x -> -x, so this is the even extension in t.
  const SpherePoints sp = materialize(rule);
  const double x1 = n.x()[0], x2 = n.x()[1], a = n.a()[0];
  double s = 0.0;
  for (std::size_t p = 0; p < sp.size(); ++p) {
    const double m1 = t * sp.xs[2 * p], m2 = t * sp.xs[2 * p + 1], ma = t * t * sp.as[p];
    const double y1 = x1 - m1, y2 = x2 - m2, ya = a - ma - 0.5 * (x1 * m2 - x2 * m1);
    s += sp.w[p] * (interp == Interp::linear ? f.sample(y1, y2, ya) : f.sample_cubic(y1, y2, ya));
  }
  return s;
}

namespace {

Rule1D family_rule(const FamilyQuad& q) {
  Rule1D out;
  std::vector<double> br{0.0};
  for (int k = 1; k <= q.r_panels; ++k) br.push_back(1.0 - std::pow(0.5, k));
  br.push_back(1.0);
  const Rule1D g = gauss_legendre(q.r_points, 0.0, 1.0);
  for (std::size_t k = 0; k + 1 < br.size(); ++k)
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.nodes.push_back(br[k] + (br[k + 1] - br[k]) * g.nodes[i]);
      out.weights.push_back((br[k + 1] - br[k]) * g.weights[i]);
    }
  return out;
}

double radial_derivative(const GridField& f, const GroupElement& n, double r, int j, const KoranyiSphereRule& rule,
                         const FamilyQuad& q) {
  auto F = [&](double t) { return sphere_conv_at(f, n, t, rule, q.interp); };
  const double d = q.fd_step;
  switch (j) {
    case 0: return F(r);
    case 1: return (F(r - 2 * d) - 8 * F(r - d) + 8 * F(r + d) - F(r + 2 * d)) / (12 * d);
    case 2: return (-F(r - 2 * d) + 16 * F(r - d) - 30 * F(r) + 16 * F(r + d) - F(r + 2 * d)) / (12 * d * d);
    default: throw std::invalid_argument("b_hj: derivative order j must be 0, 1 or 2");
  }
}

void check_grid_point(const GridField& f, const GroupElement& n) {
  if (n.dims().v != 2) throw std::invalid_argument("analytic family: points must lie in N_2");
  const Interior in{std::max({std::abs(n.x()[0]), std::abs(n.x()[1]), std::abs(n.a()[0])})};
  check_margin(f, in, 1.0 + 0.01, "analytic family");
}

}  // namespace

std::complex<double> a_alpha_at(const GridField& f, const GroupElement& n, std::complex<double> alpha,
                                const KoranyiSphereRule& rule, const FamilyQuad& q) {
  if (!(alpha.real() > 0.0)) throw std::domain_error("a_alpha: need Re alpha > 0");
  check_grid_point(f, n);
  const Rule1D rr = family_rule(q);
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const double r = rr.nodes[i];
    s += rr.weights[i] * m_alpha(r, alpha) * sphere_conv_at(f, n, r, rule, q.interp) * std::pow(r, kQ - 1);
  }
  return s;
}

std::complex<double> b_hj_at(const GridField& f, const GroupElement& n, std::complex<double> alpha, int h, int j,
                             const KoranyiSphereRule& rule, const FamilyQuad& q) {
  if (h < 0 || 2 * h >= kQ) throw std::invalid_argument("b_hj: need 0 <= h < Q/2");
  if (!(alpha.real() + h > 0.0)) throw std::domain_error("b_hj: need Re alpha + h > 0");
  check_grid_point(f, n);
  const Rule1D rr = family_rule(q);
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const double r = rr.nodes[i];
    s += rr.weights[i] * m_alpha(r, alpha + static_cast<double>(h)) * std::pow(r, kQ - 1 - 2 * h + j) *
         radial_derivative(f, n, r, j, rule, q);
  }
  return s;
}

namespace {

GridField family_apply(const GridField& f, const Interior& in,
                       const std::function<double(const GroupElement&)>& at) {
  check_margin(f, in, 1.01, "analytic family");
  GridField out(f.n(), f.L());
  const auto pts = interior_points(f, in);
  parallel_for(
      pts.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
          double x1, x2, a;
          unflatten(f, pts[p], x1, x2, a);
          out.values()[pts[p]] = at(GroupElement(kD2, {x1, x2}, {a}));
        }
      },
      1);
  return out;
}

}  // namespace

GridField a_alpha_apply(const GridField& f, std::complex<double> alpha, const KoranyiSphereRule& rule,
                        const Interior& in, const FamilyQuad& q) {
  if (alpha.imag() != 0.0) throw std::invalid_argument("a_alpha_apply: grid output is real; use a_alpha_at");
  return family_apply(f, in, [&](const GroupElement& n) { return a_alpha_at(f, n, alpha, rule, q).real(); });
}

GridField b_hj_apply(const GridField& f, std::complex<double> alpha, int h, int j, const KoranyiSphereRule& rule,
                     const Interior& in, const FamilyQuad& q) {
  if (alpha.imag() != 0.0) throw std::invalid_argument("b_hj_apply: grid output is real; use b_hj_at");
  return family_apply(f, in, [&](const GroupElement& n) { return b_hj_at(f, n, alpha, h, j, rule, q).real(); });
}

FamilyIdentityReport analytic_family_check(const GridField& f, const std::vector<GroupElement>& points,
                                           const KoranyiSphereRule& rule, const FamilyQuad& q) {
  FamilyIdentityReport rep;
  rep.points = static_cast<int>(points.size());
  rep.limit_alphas = {0.5, 0.25, 0.1, 0.0};
  rep.limit_rel_corrected.assign(rep.limit_alphas.size(), 0.0);
  rep.limit_rel_stated.assign(rep.limit_alphas.size(), 0.0);
  struct Row {
    double corr = 0, stated = 0;
    std::vector<double> lc, ls;
  };
  std::vector<Row> rows(points.size());
  parallel_for(
      points.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
          const auto& n = points[p];
          Row& row = rows[p];
          const double A = a_alpha_at(f, n, 1.0, rule, q).real();
          const double b11 = b_hj_at(f, n, 1.0, 1, 1, rule, q).real();
          const double b10 = b_hj_at(f, n, 1.0, 1, 0, rule, q).real();
          const double scale = std::max(std::abs(A), 1e-300);
          row.corr = std::abs(0.5 * (b11 + (kQ - 2) * b10) - A) / scale;
          row.stated = std::abs(-0.5 * (b11 + kQ * b10) - A) / scale;
          const double conv = sphere_conv_at(f, n, 1.0, rule, q.interp);
          const double cs = std::max(std::abs(conv), 1e-300);
          for (double al : rep.limit_alphas) {
            const double c11 = b_hj_at(f, n, al, 1, 1, rule, q).real();
            const double c10 = b_hj_at(f, n, al, 1, 0, rule, q).real();
            row.lc.push_back(std::abs(0.5 * (c11 + (kQ - 2) * c10) - conv) / cs);
            row.ls.push_back(std::abs(-0.5 * (c11 + kQ * c10) - conv) / cs);
          }
        }
      },
      1);
  for (const auto& row : rows) {
    rep.max_rel_corrected = std::max(rep.max_rel_corrected, row.corr);
    rep.max_rel_stated = std::max(rep.max_rel_stated, row.stated);
    for (std::size_t k = 0; k < rep.limit_alphas.size(); ++k) {
      rep.limit_rel_corrected[k] = std::max(rep.limit_rel_corrected[k], row.lc[k]);
      rep.limit_rel_stated[k] = std::max(rep.limit_rel_stated[k], row.ls[k]);
    }
  }
  return rep;
}

KernelDominationReport kernel_domination_check(double x, double y, const GridField& f,
                                               const std::vector<GroupElement>& points,
                                               const KoranyiSphereRule& rule, const FamilyQuad& q, double tol) {
  if (!(x >= 1.0)) throw std::invalid_argument("kernel_domination_check: need x >= 1");
  KernelDominationReport rep;
  rep.x = x;
  rep.y = y;
  rep.gamma_factor = std::abs(complex_gamma(x, 0.0) / complex_gamma(x, y));
  rep.observed_c = rep.gamma_factor / std::exp(2.0 * std::abs(y));
  rep.points = static_cast<int>(points.size());
  const GridField g = f.abs();
  std::vector<double> ratio(points.size(), 0.0);
  parallel_for(
      points.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
          const double lhs = std::abs(a_alpha_at(f, points[p], {x, y}, rule, q));
          const double rhs = rep.gamma_factor * a_alpha_at(g, points[p], x, rule, q).real();
          ratio[p] = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
        }
      },
      1);
  for (double r : ratio) rep.max_ratio = std::max(rep.max_ratio, r);
  rep.ok = rep.max_ratio <= 1.0 + tol;
  return rep;
}

DecreasingKernelReport decreasing_kernel_maximal_check(const RadialKernel& k, const GridField& f,
                                                       const RadiiLadder& ladder, const Interior& in, double eps) {
  double prev = INFINITY;
  for (int i = 0; i <= 2000; ++i) {
    const double v = k.profile(k.support * i / 2000.0);
    if (v < 0.0 || v > prev * (1.0 + 1e-12) + 1e-300)
      throw std::invalid_argument("decreasing_kernel_maximal_check: kernel '" + k.name + "' is not nonincreasing");
    prev = v;
  }
  DecreasingKernelReport rep;
  rep.kernel_l1 = k.l1_norm(sphere_mass(kD2));
  check_margin(f, in, ladder.r_max() * k.support, "decreasing_kernel_maximal_check");
  const auto pts = interior_points(f, in);
  GridField sup(f.n(), f.L());
  for (double r : ladder.radii()) {
    const GridField c = conv_radial_kernel(f, k, r, in);
    for (std::size_t p : pts) sup.values()[p] = std::max(sup.values()[p], std::abs(c.values()[p]));
  }
  const RadiiLadder ml(ladder.r0 * k.support, ladder.ratio, ladder.K);
  // M over the kernel's level-set radii: all of (0, r_max * support], sampled
  // on a finer ladder below r0 as well.
  const int extra = static_cast<int>(std::ceil(std::log(8.0) / std::log(ladder.ratio)));
  const RadiiLadder fine(ml.r0 / std::pow(ladder.ratio, extra), ladder.ratio, ladder.K + extra);
  const GridField M = standard_maximal(f, fine, in);
  rep.points = pts.size();
  for (std::size_t p : pts) {
    const double bound = rep.kernel_l1 * M.values()[p];
    if (sup.values()[p] <= (1.0 + eps) * bound) ++rep.satisfied;
    if (bound > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, sup.values()[p] / bound);
  }
  rep.fraction = rep.points ? static_cast<double>(rep.satisfied) / rep.points : 1.0;
  return rep;
}

GridField random_bumps(int n, double L, int bumps, double centre_box, std::uint64_t seed, bool signed_amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(-centre_box, centre_box), w(0.35, 0.8), amp(0.5, 1.5), sg(0.0, 1.0);
  struct Bump {
    double x1, x2, a, w, amp;
  };
  std::vector<Bump> bs;
  for (int b = 0; b < bumps; ++b) {
    Bump x{c(rng), c(rng), c(rng), w(rng), amp(rng)};
    if (signed_amp && sg(rng) < 0.5) x.amp = -x.amp;
    bs.push_back(x);
  }
  return GridField::from_function(n, L, [&](double x1, double x2, double a) {
    double s = 0.0;
    for (const auto& b : bs) {
      // n0^{-1} n
      const double y1 = x1 - b.x1, y2 = x2 - b.x2;
      const double ya = a - b.a - 0.5 * (b.x1 * x2 - b.x2 * x1);
      const double q = y1 * y1 + y2 * y2;
      const double rho4 = q * q + ya * ya;
      s += b.amp * std::exp(-rho4 / std::pow(b.w, 4));
    }
    return s;
  });
}

}  // namespace koranyi
