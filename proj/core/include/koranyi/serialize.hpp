#pragma once

// JSON forms of parameters and reports, and the flat binary layout for grid
// fields: header {v, L, n} then n^3 row-major doubles, with a JSON sidecar.

#include <filesystem>
#include <nlohmann/json.hpp>

#include "koranyi/maximal.hpp"
#include "koranyi/plancherel.hpp"
#include "koranyi/special.hpp"
#include "koranyi/spherical.hpp"
#include "koranyi/squarefn.hpp"

namespace koranyi {

using json = nlohmann::json;

json to_json(const Dimensions& d);
json to_json(const SphericalParam& p);
SphericalParam param_from_json(const json& j);
json to_json(const KoranyiSphereRule& r);   // summary only, not the nodes
json to_json(const ShatResult& r);
json to_json(const ScanReport& r);
json to_json(const MajorantReport& r);
json to_json(const PlancherelReport& r);
json to_json(const GammaRatioReport& r);
json to_json(const PointwiseBoundReport& r);
json to_json(const FamilyIdentityReport& r);
json to_json(const KernelDominationReport& r);
json to_json(const DecreasingKernelReport& r);
json to_json(const RadiiLadder& l);
const char* to_string(LadderMode m);

// Writes path (binary) and path + ".json" (sidecar).
void write_grid_field(const GridField& g, const std::filesystem::path& path, const json& extra = {});
GridField read_grid_field(const std::filesystem::path& path);

}  // namespace koranyi
