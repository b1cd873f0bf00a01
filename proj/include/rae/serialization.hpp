#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rae/asymptotics.hpp"
#include "rae/distribution.hpp"
#include "rae/optimizer.hpp"
#include "rae/simulator.hpp"

namespace rae {

// File formats. Distributions round-trip losslessly at full double precision
// (dense {"d", "p"} or sparse {"support", "values"}); curves and trajectories
// go to CSV with JSON sidecars carrying the resolved configuration.

nlohmann::json dist_to_json(const DegreeDistribution& dist, bool prefer_sparse = true);
DegreeDistribution dist_from_json(const nlohmann::json& j);
DegreeDistribution load_distribution(const std::string& path);

nlohmann::json solver_config_to_json(const SolverConfig& config);
nlohmann::json result_to_json(const OptimizationResult& result);

std::string curve_to_csv(const DecodingCurve& curve);  // header: r,undecoded
nlohmann::json curve_sidecar(const DecodingCurve& curve, const DegreeDistribution& dist,
                             nlohmann::json config);

std::string trajectories_to_csv(const TrajectoryStats& stats);  // header: trial,r,undecoded
nlohmann::json stats_to_json(const TrajectoryStats& stats);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);  // d,objective,residual,theorem2_ok

// Every artifact embeds the resolved config plus a hash of it, so a run can
// be reproduced byte-for-byte from its own metadata.
std::uint64_t config_hash(const nlohmann::json& config);
nlohmann::json with_metadata(nlohmann::json payload, nlohmann::json config);

// Writes via a temp file and rename; never leaves partial artifacts.
void write_file_atomic(const std::string& path, std::string_view content);

std::string format_double(double v);  // shortest representation, round-trip exact

inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace rae
