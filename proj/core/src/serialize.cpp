#include "koranyi/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace koranyi {

json to_json(const Dimensions& d) { return {{"v", d.v}, {"vprime", d.vprime}, {"z", d.z}, {"Q", d.Q}}; }

json to_json(const SphericalParam& p) {
  return {{"v", p.dims.v}, {"r", p.r}, {"lambda", p.lambda}, {"l", p.l}, {"in_parameter_set", p.in_parameter_set()}};
}

SphericalParam param_from_json(const json& j) {
  return SphericalParam::make(Dimensions::of(j.at("v").get<int>()), j.value("r", 0.0),
                              j.at("lambda").get<std::vector<double>>(), j.at("l").get<std::vector<int>>());
}

json to_json(const KoranyiSphereRule& r) {
  return {{"dims", to_json(r.dims)},
          {"radial_nodes", r.radial.size()},
          {"x_rule", {{"kind", to_string(r.x_rule.kind)}, {"size", r.x_rule.size()}}},
          {"z_rule", {{"kind", to_string(r.z_rule.kind)}, {"size", r.z_rule.size()}}},
          {"total_mass", r.total_mass},
          {"analytic_mass", sphere_mass(r.dims)}};
}

json to_json(const ShatResult& r) {
  return {{"param", to_json(r.param)}, {"j", r.j},
          {"value", r.value},         {"integral", r.integral},
          {"s_min", r.s_min},         {"s_max", r.s_max},
          {"scale", r.scale},         {"tail_small", r.tail_small},
          {"tail_large", r.tail_large}, {"tail_bound", r.tail_bound},
          {"tail_fraction", r.integral > 0 ? r.tail_bound / r.integral : 0.0},
          {"evaluations", r.evaluations}, {"capped", r.capped},
          {"ok", r.ok},               {"diagnostic", r.diagnostic}};
}

const char* to_string(LadderMode m) { return m == LadderMode::ray ? "ray" : "pinned"; }

json to_json(const ScanReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back(to_json(p));
  return {{"v", r.v},           {"j", r.j},           {"mode", to_string(r.mode)}, {"rung_sup", r.rung_sup},
          {"ratios", r.ratios}, {"sup", r.sup},       {"all_ok", r.all_ok},        {"stabilized", r.stabilized},
          {"verdict", r.verdict}, {"points", pts}};
}

json to_json(const MajorantReport& r) {
  return {{"c_fit", r.c_fit}, {"c_validate", r.c_validate}, {"points", r.points}, {"ok", r.ok}};
}

json to_json(const PlancherelReport& r) {
  json prof = json::array();
  for (const auto& p : r.profiles)
    prof.push_back({{"name", p.name},
                    {"lhs", p.lhs},
                    {"rhs", p.rhs},
                    {"rel_err", p.rel_err},
                    {"l_tail", p.l_tail},
                    {"last_l_shell", p.last_l_shell},
                    {"lambda_tail", p.lambda_tail}});
  return {{"fitted_constant", r.fitted_constant}, {"lambda_max", r.lambda_max}, {"l_max", r.l_max},
          {"aborted", r.aborted}, {"message", r.message}, {"profiles", prof}};
}

json to_json(const GammaRatioReport& r) {
  return {{"c_min", r.c_min}, {"c_max", r.c_max}, {"signed_min", r.signed_min}, {"signed_max", r.signed_max},
          {"samples", r.samples}};
}

json to_json(const PointwiseBoundReport& r) {
  return {{"points", r.points},     {"satisfied", r.satisfied}, {"fraction", r.fraction},
          {"worst_ratio", r.worst_ratio}, {"mu_mass", r.mu_mass}, {"eps", r.eps}, {"seconds", r.seconds}};
}

json to_json(const FamilyIdentityReport& r) {
  return {{"alpha", r.alpha},
          {"max_rel_corrected", r.max_rel_corrected},
          {"max_rel_stated", r.max_rel_stated},
          {"limit_alphas", r.limit_alphas},
          {"limit_rel_corrected", r.limit_rel_corrected},
          {"limit_rel_stated", r.limit_rel_stated},
          {"points", r.points}};
}

json to_json(const KernelDominationReport& r) {
  return {{"x", r.x}, {"y", r.y}, {"gamma_factor", r.gamma_factor}, {"observed_c", r.observed_c},
          {"max_ratio", r.max_ratio}, {"points", r.points}, {"ok", r.ok}};
}

json to_json(const DecreasingKernelReport& r) {
  return {{"points", r.points}, {"satisfied", r.satisfied}, {"fraction", r.fraction},
          {"worst_ratio", r.worst_ratio}, {"kernel_l1", r.kernel_l1}};
}

json to_json(const RadiiLadder& l) { return {{"r0", l.r0}, {"ratio", l.ratio}, {"K", l.K}, {"r_max", l.r_max()}}; }

void write_grid_field(const GridField& g, const std::filesystem::path& path, const json& extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_grid_field: cannot open " + path.string());
  const std::int32_t v = 2, n = g.n();
  const double L = g.L();
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
  out.write(reinterpret_cast<const char*>(&L), sizeof L);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(g.values().data()),
            static_cast<std::streamsize>(g.values().size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_grid_field: write failed for " + path.string());

  json side = {{"format", "koranyi-grid-v1"},
               {"header", {{"v", "int32"}, {"L", "float64"}, {"n", "int32"}}},
               {"payload", "n^3 float64, row-major, index (i x1, j x2, k a), node i at -L + (i + 1/2) 2L/n"},
               {"v", v},
               {"L", L},
               {"n", n},
               {"spacing", g.spacing()},
               {"byte_order", "native"}};
  if (!extra.is_null()) side["extra"] = extra;
  std::ofstream js(path.string() + ".json");
  js << side.dump(2) << "\n";
}

GridField read_grid_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_grid_field: cannot open " + path.string());
  std::int32_t v = 0, n = 0;
  double L = 0.0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || v != 2 || n < 2 || n > 4096) throw std::runtime_error("read_grid_field: bad header in " + path.string());
  GridField g(n, L);
  in.read(reinterpret_cast<char*>(g.values().data()), static_cast<std::streamsize>(g.values().size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_grid_field: truncated payload in " + path.string());
  return g;
}

}  // namespace koranyi
