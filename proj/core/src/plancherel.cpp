#include "koranyi/plancherel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "koranyi/parallel.hpp"
#include "koranyi/quadrature.hpp"
#include "koranyi/special.hpp"

namespace koranyi {

double eta_density(const std::vector<double>& lambda, int v) {
  if (static_cast<int>(lambda.size()) != v / 2) throw std::invalid_argument("eta_density: need floor(v/2) lambdas");
  for (double x : lambda)
    if (!(x >= 0.0)) throw std::invalid_argument("eta_density: lambdas must be nonnegative");
  for (std::size_t k = 1; k < lambda.size(); ++k)
    if (!(lambda[k - 1] > lambda[k])) return 0.0;
  double d = 1.0;
  for (double x : lambda) d *= (v % 2 == 1) ? x * x * x : x;
  for (std::size_t j = 0; j < lambda.size(); ++j)
    for (std::size_t k = j + 1; k < lambda.size(); ++k) {
      const double q = lambda[j] * lambda[j] - lambda[k] * lambda[k];
      d *= q * q;
    }
  return d;
}

RadialProfile gaussian_profile(double alpha, double beta, double amp) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("gaussian_profile: widths must be positive");
  RadialProfile f;
  std::ostringstream os;
  os << "gauss(" << alpha << "," << beta << ")";
  f.name = os.str();
  f.u = [=](double rho, double a) { return amp * std::exp(-alpha * rho * rho - beta * a * a); };
  f.rx = std::sqrt(37.0 / alpha);
  f.ra = std::sqrt(37.0 / beta);
  return f;
}

double gaussian_matrix_element_v2(double alpha, double beta, double lambda, int l) {
  if (!(lambda > 0.0)) throw std::domain_error("gaussian_matrix_element_v2: lambda must be positive");
  const double c = 2.0 * alpha / lambda + 0.5;
  return 2.0 * std::numbers::pi / lambda * std::pow(c - 1.0, l) / std::pow(c, l + 1) * std::sqrt(std::numbers::pi / beta) *
         std::exp(-lambda * lambda / (4.0 * beta));
}

namespace {

double sphere_area(int n) {
  // |S^{n-1}| in R^n.
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace

std::complex<double> radial_matrix_element(const RadialProfile& f, const SphericalParam& p,
                                           const MatrixElementSpec& spec) {
  const Dimensions d = p.dims;
  const double dn = p.d2_norm();
  double osc = p.r;
  for (int j = 0; j < d.vprime; ++j) osc += std::sqrt(2.0 * p.lambda[j] * (p.l[j] + 1.0));
  const int rho_panels = 2 + static_cast<int>(std::ceil(f.rx * osc / std::numbers::pi));
  const int a_panels = 2 + static_cast<int>(std::ceil(f.ra * dn / std::numbers::pi));
  const Rule1D rr = composite_gauss_legendre(spec.rho_points, rho_panels, 0.0, f.rx);
  const Rule1D ar = composite_gauss_legendre(spec.a_points, a_panels, 0.0, f.ra);
  const SphereRule xs = d.v == 2 ? sphere_rule(2, 8, SphereRuleKind::exact) : product_sphere_rule(d.v, spec.sphere_k);
  const double alpha = 0.5 * (d.z - 2);
  const double cx = sphere_area(d.v), ca = sphere_area(d.z);

  std::vector<double> bes(ar.size());
  for (std::size_t k = 0; k < ar.size(); ++k) bes[k] = reduced_bessel(alpha, ar.nodes[k] * dn);

  struct C {
    std::complex<double> v;
    C& operator+=(const C& o) {
      v += o.v;
      return *this;
    }
  };
  const auto total = parallel_sum<C>(
      rr.size(),
      [&](std::size_t i) {
        const double rho = rr.nodes[i];
        const auto avg = sphere_integrate(xs, [&](std::span<const double> y) {
          double mod = 1.0;
          for (int j = 0; j < d.vprime; ++j) {
            const double q = y[2 * j] * y[2 * j] + y[2 * j + 1] * y[2 * j + 1];
            mod *= laguerre_fn(p.l[j], 0.5 * p.lambda[j] * rho * rho * q);
          }
          const double ph = d.odd() ? p.r * rho * y[d.v - 1] : 0.0;
          return std::polar(mod, ph);
        });
        double inner = 0.0;
        for (std::size_t k = 0; k < ar.size(); ++k) {
          const double s = ar.nodes[k];
          inner += ar.weights[k] * std::pow(s, d.z - 1) * f.u(rho, s) * bes[k];
        }
        return C{rr.weights[i] * std::pow(rho, d.v - 1) * avg.value * inner};
      },
      4);
  return cx * ca * total.v;
}

namespace {

struct LambdaSample {
  double sum = 0.0;       // sum_{l <= L} M_l^2
  double last = 0.0;      // M_L^2
  double complete = 0.0;  // sum over all l, by completeness of the l_n in L^2(0, inf)
};

LambdaSample lambda_sample(const RadialProfile& f, double lambda, int L, const PlancherelSpec& spec) {
  const double two_pi = 2.0 * std::numbers::pi;
  // 16 points per half period of cos(lambda a)
  const int a_panels = std::max(spec.a_points / 16, 1 + static_cast<int>(std::ceil(lambda * f.ra / std::numbers::pi)));
  const Rule1D ar = composite_gauss_legendre(16, a_panels, 0.0, f.ra);
  const double osc = f.rx * std::sqrt(2.0 * lambda * (L + 1.0)) / std::numbers::pi;
  const int panels = 2 + static_cast<int>(std::ceil(osc));
  const Rule1D rr = composite_gauss_legendre(spec.rho_per_oscillation, panels, 0.0, f.rx);
  std::vector<double> M(static_cast<std::size_t>(L) + 1, 0.0);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < rr.size(); ++i) {
    const double rho = rr.nodes[i];
    double F = 0.0;
    for (std::size_t k = 0; k < ar.size(); ++k) F += ar.weights[k] * f.u(rho, ar.nodes[k]) * std::cos(lambda * ar.nodes[k]);
    F *= 2.0;
    const double w = rr.weights[i] * rho * F;
    norm2 += rr.weights[i] * rho * F * F;
    // l_n(x) for n = 0..L by the three-term recurrence.
    const double x = 0.5 * lambda * rho * rho;
    double prev = std::exp(-0.5 * x);
    M[0] += w * prev;
    if (L == 0) continue;
    double cur = (1.0 - x) * prev;
    M[1] += w * cur;
    for (int n = 1; n < L; ++n) {
      const double next = ((2.0 * n + 1.0 - x) * cur - n * prev) / (n + 1.0);
      prev = cur;
      cur = next;
      M[n + 1] += w * cur;
    }
  }
  LambdaSample s;
  for (int n = 0; n <= L; ++n) s.sum += two_pi * two_pi * M[n] * M[n];
  s.last = two_pi * two_pi * M[L] * M[L];
  s.complete = two_pi * two_pi / lambda * norm2;
  return s;
}

}  // namespace

PlancherelReport plancherel_check_v2(const std::vector<RadialProfile>& profiles, double lambda_max, int l_max,
                                     const PlancherelSpec& spec) {
  if (profiles.empty()) throw std::invalid_argument("plancherel_check_v2: need at least one profile");
  if (!(lambda_max > 0.0) || l_max < 0) throw std::invalid_argument("plancherel_check_v2: bad truncation");
  PlancherelReport rep;
  rep.lambda_max = lambda_max;
  rep.l_max = l_max;

  // lambda nodes: geometric panels towards 0, then [lambda_max, 2 lambda_max] for the tail.
  const Rule1D g = gauss_legendre(spec.lambda_points, 0.0, 1.0);
  std::vector<double> br{0.0};
  for (int k = spec.lambda_panels; k >= 1; --k) br.push_back(lambda_max * std::pow(0.5, k));
  for (int k = 1; k <= 8; ++k) br.push_back(lambda_max * (0.5 + k / 16.0));
  const int main_panels = static_cast<int>(br.size()) - 1;
  for (int k = 1; k <= 4; ++k) br.push_back(lambda_max * (1.0 + k / 4.0));
  std::vector<double> ln, lw;
  std::vector<bool> in_main;
  for (std::size_t k = 0; k + 1 < br.size(); ++k)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double h = br[k + 1] - br[k];
      ln.push_back(br[k] + h * g.nodes[i]);
      lw.push_back(h * g.weights[i]);
      in_main.push_back(static_cast<int>(k) < main_panels);
    }

  for (const auto& f : profiles) {
    PlancherelProfileResult res;
    res.name = f.name;
    struct Acc {
      double rhs = 0, last = 0, complete = 0, ltail = 0;
      Acc& operator+=(const Acc& o) {
        rhs += o.rhs;
        last += o.last;
        complete += o.complete;
        ltail += o.ltail;
        return *this;
      }
    };
    const Acc acc = parallel_sum<Acc>(
        ln.size(),
        [&](std::size_t i) {
          const LambdaSample s = lambda_sample(f, ln[i], l_max, spec);
          const double w = lw[i] * ln[i];
          Acc a;
          if (in_main[i]) {
            a.rhs = w * s.sum;
            a.last = w * s.last;
            a.complete = w * s.complete;
          } else {
            a.ltail = w * s.complete;
          }
          return a;
        },
        1);
    res.rhs = acc.rhs;
    res.l_tail = acc.complete > 0.0 ? (acc.complete - acc.rhs) / acc.complete : 0.0;
    res.last_l_shell = acc.rhs > 0.0 ? acc.last / acc.rhs : 0.0;
    res.lambda_tail = acc.complete > 0.0 ? acc.ltail / acc.complete : 0.0;

    // ||f||^2 on the cube [-rx, rx]^2 x [-ra, ra].
    const int per_panel = 12;
    const int panels = std::max(1, spec.cube_points / per_panel);
    const Rule1D cx = composite_gauss_legendre(per_panel, panels, -f.rx, f.rx);
    const Rule1D ca = composite_gauss_legendre(per_panel, panels, -f.ra, f.ra);
    res.lhs = parallel_sum<double>(
        cx.size(),
        [&](std::size_t i) {
          double s = 0.0;
          for (std::size_t j = 0; j < cx.size(); ++j) {
            const double rho = std::hypot(cx.nodes[i], cx.nodes[j]);
            for (std::size_t k = 0; k < ca.size(); ++k) {
              const double u = f.u(rho, std::abs(ca.nodes[k]));
              s += cx.weights[j] * ca.weights[k] * u * u;
            }
          }
          return cx.weights[i] * s;
        },
        1);
    rep.profiles.push_back(res);
  }

  std::ostringstream msg;
  for (const auto& r : rep.profiles)
    if (r.l_tail > 0.01 || r.lambda_tail > 0.01) {
      rep.aborted = true;
      msg << r.name << ": truncation tail above 1% (l " << r.l_tail << ", lambda " << r.lambda_tail << "); ";
    }
  const auto& f0 = rep.profiles.front();
  rep.fitted_constant = f0.rhs > 0.0 ? f0.lhs / f0.rhs : 0.0;
  for (auto& r : rep.profiles) r.rel_err = std::abs(rep.fitted_constant * r.rhs - r.lhs) / r.lhs;
  rep.message = msg.str();
  return rep;
}

}  // namespace koranyi
