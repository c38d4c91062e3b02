#include <cmath>
#include <memory>
#include <random>

#include "koranyi/maximal.hpp"
#include "run.hpp"

namespace koranyi::cli {

namespace {

const Dimensions kV2 = Dimensions::of(2);

GridField make_field(const std::string& spec, int n, double L, std::uint64_t seed) {
  if (spec == "zero") return GridField(n, L, 0.0);
  if (spec == "gaussian")
    return GridField::from_function(n, L, [](double x1, double x2, double a) {
      return std::exp(-x1 * x1 - x2 * x2 - 0.7 * a * a);
    });
  if (spec.rfind("bumps:", 0) == 0) {
    const int k = static_cast<int>(parse_list(spec.substr(6), "--field")[0]);
    if (k < 1) throw UsageError("--field bumps:K needs K >= 1");
    return random_bumps(n, L, k, 0.4 * L, seed);
  }
  throw UsageError("--field: expected zero, gaussian or bumps:K");
}

struct DemoOpts {
  int grid = 64;
  double L = 4.0;
  std::string field = "gaussian";
  std::string ladder = "0.1073741824,1.25,10";
  double eps = 0.05;
  double interior = 1.5;
  int s_steps = 40;
  bool dump = false;
};

Result maximal_demo(const DemoOpts& o, const Common& c) {
  const auto ld = parse_list(o.ladder, "--ladder");
  if (ld.size() != 3 || ld[0] <= 0 || ld[1] <= 1 || ld[1] > 1.25 || ld[2] < 1)
    throw UsageError("--ladder: r0,ratio,K with r0 > 0, 1 < ratio <= 1.25, K >= 1");
  const RadiiLadder lad(ld[0], ld[1], static_cast<int>(ld[2]));
  const GridField f = make_field(o.field, o.grid, o.L, c.seed);
  const auto rule = grid_sphere_rule(8, 16);
  const Interior in{o.interior};
  PointwiseBoundFields fields;
  const auto rep = pointwise_bound_check(f, lad, o.s_steps, rule, in, o.eps, &fields);

  Result res;
  res.status = rep.fraction >= 0.99 ? 0 : 1;
  res.summary = {{"report", to_json(rep)},
                 {"ladder", to_json(lad)},
                 {"grid", {{"n", o.grid}, {"L", o.L}, {"spacing", f.spacing()}, {"interior", o.interior}}},
                 {"field", o.field},
                 {"required_fraction", 0.99},
                 {"slack", o.eps},
                 {"measure", "raw mu on the left, Q|B_1| = mu(S_1) in front of M"}};
  // profile along the x1 axis through the grid line nearest the origin
  Table t{"profile_x1", {"x1", "f", "A", "bound"}, {}};
  const int mid = o.grid / 2;
  for (int i = 0; i < o.grid; ++i) {
    if (!in.contains(f, i, mid, mid)) continue;
    t.rows.push_back({num(f.coord(i)), num(f.at(i, mid, mid)), num(fields.lhs.at(i, mid, mid)),
                      num(fields.bound.at(i, mid, mid))});
  }
  res.tables.push_back(std::move(t));
  if (o.dump) {
    res.fields.emplace_back("field", f);
    res.fields.emplace_back("spherical_maximal", std::move(fields.lhs));
    res.fields.emplace_back("bound", std::move(fields.bound));
  }
  return res;
}

struct FamilyOpts {
  int grid = 64;
  double L = 4.0;
  int points = 3;
  std::string form = "corrected";
};

Result analytic_family(const FamilyOpts& o, const Common& c) {
  const GridField g = make_field("gaussian", o.grid, o.L, c.seed);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  std::vector<GroupElement> pts;
  for (int i = 0; i < o.points; ++i) pts.emplace_back(kV2, std::vector<double>{u(rng), u(rng)}, std::vector<double>{u(rng)});
  const auto rep = analytic_family_check(g, pts, grid_sphere_rule(8, 16));

  const bool stated = o.form == "stated";
  const double rel = stated ? rep.max_rel_stated : rep.max_rel_corrected;
  const double lim = stated ? rep.limit_rel_stated.back() : rep.limit_rel_corrected.back();
  Result res;
  res.status = rel <= 1e-4 && lim <= 1e-3 ? 0 : 1;
  res.summary = {{"report", to_json(rep)},
                 {"checked_form", stated ? "A = -1/2 (B_{1,1} + Q B_{1,0})" : "A = 1/2 (B_{1,1} + (Q-2) B_{1,0})"},
                 {"identity_rel_err", rel},
                 {"identity_tolerance", 1e-4},
                 {"limit_rel_err", lim},
                 {"limit_tolerance", 1e-3}};
  Table t{"family_limit", {"alpha", "rel_corrected", "rel_stated"}, {}};
  for (std::size_t k = 0; k < rep.limit_alphas.size(); ++k)
    t.rows.push_back({num(rep.limit_alphas[k]), num(rep.limit_rel_corrected[k]), num(rep.limit_rel_stated[k])});
  res.tables.push_back(std::move(t));
  return res;
}

}  // namespace

void add_maximal_commands(CLI::App& app, Registry& reg) {
  {
    auto o = std::make_shared<DemoOpts>();
    auto& c = add_command(app, reg, "maximal-demo", "pointwise spherical-maximal estimate on an N_2 grid");
    c.app->add_option("--grid", o->grid, "points per axis")->check(CLI::Range(8, 512));
    c.app->add_option("--L", o->L, "half width of the box")->check(CLI::PositiveNumber);
    c.app->add_option("--field", o->field, "zero | gaussian | bumps:K");
    c.app->add_option("--ladder", o->ladder, "r0,ratio,K");
    c.app->add_option("--eps", o->eps)->check(CLI::NonNegativeNumber);
    c.app->add_option("--interior", o->interior, "half width of the checked region");
    c.app->add_option("--s-steps", o->s_steps)->check(CLI::Range(2, 100000));
    c.app->add_flag("--dump", o->dump, "write the field, A f and the bound under --out");
    c.run = [o](const Common& cm) { return maximal_demo(*o, cm); };
  }
  {
    auto o = std::make_shared<FamilyOpts>();
    auto& c = add_command(app, reg, "analytic-family", "A^alpha against the B combination and its alpha -> 0 limit");
    c.app->add_option("--grid", o->grid)->check(CLI::Range(16, 256));
    c.app->add_option("--L", o->L)->check(CLI::PositiveNumber);
    c.app->add_option("--points", o->points)->check(CLI::Range(1, 1000));
    c.app->add_option("--form", o->form, "identity to check")->check(CLI::IsMember({"corrected", "stated"}));
    c.run = [o](const Common& cm) { return analytic_family(*o, cm); };
  }
}

}  // namespace koranyi::cli
