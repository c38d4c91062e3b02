#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "koranyi/group.hpp"
#include "koranyi/quadrature.hpp"
#include "koranyi/special.hpp"
#include "run.hpp"

namespace koranyi::cli {

namespace {

double coord_diff(const GroupElement& p, const GroupElement& q) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.x().size(); ++i) m = std::max(m, std::abs(p.x()[i] - q.x()[i]));
  for (std::size_t i = 0; i < p.a().size(); ++i) m = std::max(m, std::abs(p.a()[i] - q.a()[i]));
  return m;
}

struct GroupOpts {
  int v = 4;
  int samples = 1000;
};

Result group_selfcheck(const GroupOpts& o, const Common& c) {
  const auto d = Dimensions::of(o.v);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> ur(0.1, 10.0);
  struct Inv {
    const char* name;
    double tol;
    double err = 0.0;
  };
  std::vector<Inv> inv{{"associativity", 1e-12},     {"inverse", 1e-12},
                       {"dilation_homogeneity", 1e-12}, {"dilation_automorphism", 1e-12},
                       {"orthogonal_norm_invariance", 1e-10}, {"orthogonal_automorphism", 1e-10},
                       {"skew_round_trip", 1e-15}};
  for (int s = 0; s < o.samples; ++s) {
    const auto n = random_element(d, rng), m = random_element(d, rng), p = random_element(d, rng);
    const double r = ur(rng), nn = koranyi_norm(n);
    const Matrix k = haar_orthogonal_sample(o.v, rng);
    const auto scale = [](const GroupElement& g) { return std::max(1.0, koranyi_norm(g) * koranyi_norm(g)); };
    const auto nm = multiply(n, m);
    inv[0].err = std::max(inv[0].err, coord_diff(multiply(nm, p), multiply(n, multiply(m, p))) / scale(nm));
    inv[1].err = std::max(inv[1].err, coord_diff(multiply(n, n.inverse()), GroupElement::identity(d)) / scale(n));
    inv[2].err = std::max(inv[2].err, std::abs(koranyi_norm(dilate(r, n)) - r * nn) / (r * nn));
    inv[3].err = std::max(inv[3].err, coord_diff(dilate(r, nm), multiply(dilate(r, n), dilate(r, m))) /
                                          (r * r * scale(nm)));
    inv[4].err = std::max(inv[4].err, std::abs(koranyi_norm(orthogonal_act(k, n)) - nn) / nn);
    inv[5].err = std::max(inv[5].err, coord_diff(orthogonal_act(k, nm),
                                                 multiply(orthogonal_act(k, n), orthogonal_act(k, m))) /
                                          scale(nm));
    inv[6].err = std::max(inv[6].err, coord_diff(GroupElement(d, {n.x().begin(), n.x().end()},
                                                              from_skew(to_skew(n.a(), d), d)),
                                                 n));
  }
  Result res;
  Table t{"invariants", {"invariant", "max_error", "tolerance", "pass"}, {}};
  json arr = json::array();
  for (const auto& i : inv) {
    const bool ok = i.err <= i.tol;
    if (!ok) res.status = 1;
    arr.push_back({{"invariant", i.name}, {"max_error", i.err}, {"tolerance", i.tol}, {"pass", ok}});
    t.rows.push_back({i.name, num(i.err), num(i.tol), num(ok)});
  }
  res.summary = {{"v", o.v}, {"samples", o.samples}, {"seed", c.seed}, {"invariants", arr}};
  res.tables.push_back(std::move(t));
  return res;
}

struct MassOpts {
  int v = 2;
  int t_points = 32;
};

Result mu_mass_cmd(const MassOpts& o, const Common&) {
  const auto d = Dimensions::of(o.v);
  // the integrand is constant, so low-order direction rules suffice
  const auto rule = default_koranyi_rule(d, o.t_points, 2, 64, 1);
  const double computed = koranyi_sphere_integrate(rule, [](const GroupElement&) { return 1.0; });
  const double analytic = sphere_mass(d);
  const double rel = std::abs(computed / analytic - 1.0);
  const double tol = 1e-8;
  Result res;
  res.status = rel <= tol ? 0 : 1;
  res.summary = {{"v", o.v},           {"computed", computed}, {"analytic", analytic},
                 {"formula", "B(v/4, z/2) / 2"}, {"rel_err", rel},   {"tolerance", tol},
                 {"radial_nodes", rule.radial.size()}};
  res.tables.push_back({"mass", {"v", "computed", "analytic", "rel_err", "tolerance"},
                        {{num(o.v), num(computed), num(analytic), num(rel), num(tol)}}});
  return res;
}

struct BesselOpts {
  std::string n = "2,3,4,6";
  std::string x = "0,1,5,10,20";
  int points = 32;        // product rule points per level, or samples/1000 for Monte-Carlo
  int mc_samples = 200000;
};

Result bessel_identity(const BesselOpts& o, const Common& c) {
  Result res;
  Table t{"plane_wave", {"n", "x", "quadrature", "bessel", "error", "sigma", "tolerance", "rule", "pass"}, {}};
  json rows = json::array();
  for (double nd : parse_list(o.n, "--n")) {
    const int n = static_cast<int>(nd);
    if (n < 2 || n != nd) throw UsageError("--n: dimensions must be integers >= 2");
    const bool mc = n >= 7;
    const SphereRule rule = n == 2  ? sphere_rule(2, 4 * o.points, SphereRuleKind::exact)
                            : mc    ? monte_carlo_sphere_rule(n, o.mc_samples, c.seed)
                                    : product_sphere_rule(n, o.points);
    for (double x : parse_list(o.x, "--x")) {
      const auto est = sphere_integrate(rule, [&](std::span<const double> y) { return std::cos(x * y[n - 1]); });
      const double exact = sphere_plane_wave(n, x), err = std::abs(est.value.real() - exact);
      const double tol = mc ? std::max(3.0 * est.std_error, 1e-10) : 1e-6;
      const bool ok = err <= tol;
      if (!ok) res.status = 1;
      rows.push_back({{"n", n},
                      {"x", x},
                      {"quadrature", est.value.real()},
                      {"bessel", exact},
                      {"error", err},
                      {"sigma", est.std_error},
                      {"tolerance", tol},
                      {"rule", to_string(rule.kind)},
                      {"pass", ok}});
      t.rows.push_back({num(n), num(x), num(est.value.real()), num(exact), num(err), num(est.std_error), num(tol),
                        to_string(rule.kind), num(ok)});
    }
  }
  res.summary = {{"identity", "sphere average of exp(i<x,y>) = reduced Bessel of order (n-2)/2"}, {"rows", rows}};
  res.tables.push_back(std::move(t));
  return res;
}

struct GammaOpts {
  double x_min = 0.5, x_max = 3.0, y_max = 50.0;
  int nx = 26, ny = 400;
};

Result gamma_estimate(const GammaOpts& o, const Common&) {
  if (!(o.x_min > 0 && o.x_max >= o.x_min && o.y_max >= 1)) throw UsageError("need 0 < x-min <= x-max, y-max >= 1");
  const auto rep = gamma_ratio_estimate_check(o.x_min, o.x_max, o.y_max, o.nx, o.ny);
  const double lim = 1.0 / std::sqrt(2 * std::numbers::pi);
  Result res;
  Table t{"stirling", {"x", "y", "ratio", "limit", "abs_diff"}, {}};
  for (int i = 0; i < 4; ++i) {
    const double x = o.x_min + (o.x_max - o.x_min) * i / 3.0;
    for (double y : {10.0, 100.0, 1000.0, 10000.0}) {
      const double r = gamma_ratio(x, y);
      t.rows.push_back({num(x), num(y), num(r), num(lim), num(std::abs(r - lim))});
    }
  }
  const bool band = rep.c_min > 0 && std::isfinite(rep.c_max);
  res.status = band ? 0 : 1;
  res.summary = {{"ratio", "exp(-pi |y| / 2) |y|^(x - 1/2) / |Gamma(x + iy)|"},
                 {"x_range", {o.x_min, o.x_max}},
                 {"y_range", {1.0, o.y_max}},
                 {"band", {rep.c_min, rep.c_max}},
                 {"signed_band_y_positive", {rep.signed_min, rep.signed_max}},
                 {"samples", rep.samples},
                 {"stirling_limit", lim},
                 {"pass", band}};
  res.tables.push_back(std::move(t));
  return res;
}

}  // namespace

void add_core_commands(CLI::App& app, Registry& reg) {
  {
    auto o = std::make_shared<GroupOpts>();
    auto& c = add_command(app, reg, "group-selfcheck", "group law, dilation and O(v) invariants on random samples");
    c.app->add_option("--v", o->v, "number of generators")->check(CLI::Range(2, 16));
    c.app->add_option("--samples", o->samples, "random triples")->check(CLI::Range(1, 10000000));
    c.run = [o](const Common& cm) { return group_selfcheck(*o, cm); };
  }
  {
    auto o = std::make_shared<MassOpts>();
    auto& c = add_command(app, reg, "mu-mass", "total mass of the sphere measure against B(v/4, z/2)/2");
    c.app->add_option("--v", o->v, "number of generators")->check(CLI::Range(2, 8));
    c.app->add_option("--t-points", o->t_points, "Gauss points per radial part")->check(CLI::Range(4, 256));
    c.run = [o](const Common& cm) { return mu_mass_cmd(*o, cm); };
  }
  {
    auto o = std::make_shared<BesselOpts>();
    auto& c = add_command(app, reg, "bessel-identity", "plane-wave integrals over spheres against reduced Bessel");
    c.app->add_option("--n", o->n, "comma list of ambient dimensions");
    c.app->add_option("--x", o->x, "comma list of |x|");
    c.app->add_option("--points", o->points, "product rule points per level")->check(CLI::Range(2, 64));
    c.app->add_option("--mc-samples", o->mc_samples, "Monte-Carlo samples for n >= 7")->check(CLI::Range(100, 100000000));
    c.run = [o](const Common& cm) { return bessel_identity(*o, cm); };
  }
  {
    auto o = std::make_shared<GammaOpts>();
    auto& c = add_command(app, reg, "gamma-estimate", "band of exp(-pi|y|/2)|y|^(x-1/2)/|Gamma(x+iy)|");
    c.app->add_option("--x-min", o->x_min);
    c.app->add_option("--x-max", o->x_max);
    c.app->add_option("--y-max", o->y_max);
    c.app->add_option("--nx", o->nx)->check(CLI::Range(1, 100000));
    c.app->add_option("--ny", o->ny)->check(CLI::Range(1, 1000000));
    c.run = [o](const Common& cm) { return gamma_estimate(*o, cm); };
  }
}

}  // namespace koranyi::cli
