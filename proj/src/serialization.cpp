#include "rae/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rae/errors.hpp"

namespace rae {

using nlohmann::json;

std::string format_double(double v) {
  // Shortest decimal that round-trips; mirrors the JSON encoder's policy.
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

json dist_to_json(const DegreeDistribution& dist, bool prefer_sparse) {
  const auto support = dist.support(0.0);
  if (prefer_sparse && dist.d() > 64 && 2 * support.size() < dist.d()) {
    json j;
    j["support"] = support;
    std::vector<double> values;
    values.reserve(support.size());
    for (const std::size_t i : support) values.push_back(dist.p(i));
    j["values"] = values;
    j["d"] = dist.d();
    return j;
  }
  json j;
  j["d"] = dist.d();
  j["p"] = std::vector<double>(dist.probs().begin(), dist.probs().end());
  return j;
}

DegreeDistribution dist_from_json(const json& j) {
  try {
    if (j.contains("p")) {
      std::vector<double> p = j.at("p").get<std::vector<double>>();
      if (j.contains("d") && j.at("d").get<std::size_t>() != p.size())
        throw validation_error("field 'd' disagrees with the length of 'p'");
      return DegreeDistribution(std::move(p));
    }
    if (j.contains("support")) {
      const auto support = j.at("support").get<std::vector<std::size_t>>();
      const auto values = j.at("values").get<std::vector<double>>();
      if (support.size() != values.size())
        throw validation_error("'support' and 'values' lengths differ");
      std::size_t max_idx = 0;
      for (const std::size_t i : support) {
        if (i < 1) throw validation_error("support indices are 1-based degrees");
        max_idx = std::max(max_idx, i);
      }
      std::size_t d = max_idx;
      if (j.contains("d")) {
        d = j.at("d").get<std::size_t>();
        if (d < max_idx)
          throw validation_error("field 'd' is smaller than the largest support index");
      }
      std::vector<double> p(d, 0.0);
      for (std::size_t a = 0; a < support.size(); ++a) {
        if (p[support[a] - 1] != 0.0)
          throw validation_error("duplicate support index " + std::to_string(support[a]));
        p[support[a] - 1] = values[a];
      }
      return DegreeDistribution(std::move(p));
    }
  } catch (const json::exception& e) {
    throw validation_error(std::string("malformed distribution JSON: ") + e.what());
  }
  throw validation_error("distribution JSON needs either field 'p' or 'support'/'values'");
}

DegreeDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw validation_error(std::string("JSON parse error in ") + path + ": " + e.what());
  }
  return dist_from_json(j);
}

json solver_config_to_json(const SolverConfig& config) {
  return json{{"quad_order", config.quad_order},
              {"residual_tol", config.residual_tol},
              {"phase1_tol", config.phase1_tol},
              {"phase1_max_iters", config.phase1_max_iters},
              {"phase2_max_changes", config.phase2_max_changes},
              {"support_threshold", config.support_threshold}};
}

std::uint64_t config_hash(const json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json with_metadata(json payload, json config) {
  payload["config"] = config;
  payload["config_hash"] = config_hash(config);
  payload["version"] = std::string(kToolVersion);
  return payload;
}

json result_to_json(const OptimizationResult& result) {
  json sparse_p = json::object();
  for (const std::size_t i : result.support)
    sparse_p[std::to_string(i)] = result.dist.p(i);
  json j{{"d", result.dist.d()},
         {"support", result.support},
         {"p", sparse_p},
         {"objective", result.objective},
         {"lambda", result.certificate.lambda},
         {"residual_support", result.certificate.residual_support},
         {"residual_off_support", result.certificate.residual_off_support},
         {"certificate_passing", result.certificate.passing},
         {"theorem2_ok", result.theorem2_ok},
         {"converged", result.converged},
         {"min_g_derivative", result.monotonicity.min_derivative},
         {"argmin_t", result.monotonicity.argmin_t},
         {"support_threshold", result.config.support_threshold},
         {"phase1_iters", result.phase1_iters},
         {"phase2_changes", result.phase2_changes}};
  return with_metadata(std::move(j), solver_config_to_json(result.config));
}

std::string curve_to_csv(const DecodingCurve& curve) {
  std::string out = "r,undecoded\n";
  for (std::size_t i = 0; i < curve.r_grid.size(); ++i) {
    out += format_double(curve.r_grid[i]);
    out += ',';
    out += format_double(curve.undecoded_fraction[i]);
    out += '\n';
  }
  return out;
}

json curve_sidecar(const DecodingCurve& curve, const DegreeDistribution& dist, json config) {
  json j{{"area", curve.area}, {"dist", dist_to_json(dist)}, {"monotone", curve.monotone_g}};
  return with_metadata(std::move(j), std::move(config));
}

std::string trajectories_to_csv(const TrajectoryStats& stats) {
  std::string out = "trial,r,undecoded\n";
  for (std::size_t t = 0; t < stats.trajectories.size(); ++t) {
    for (std::size_t i = 0; i < stats.r_grid.size(); ++i) {
      out += std::to_string(t);
      out += ',';
      out += format_double(stats.r_grid[i]);
      out += ',';
      out += format_double(stats.trajectories[t][i]);
      out += '\n';
    }
  }
  return out;
}

json stats_to_json(const TrajectoryStats& stats) {
  json j{{"k", stats.k},
         {"trials", stats.trials},
         {"seed", stats.seed},
         {"rng", std::string(Xoshiro256::kAlgorithmId)},
         {"arrival", stats.arrival == ArrivalModel::sequential ? "sequential" : "poissonized"},
         {"rae", stats.rae_estimate},
         {"stderr", stats.rae_stderr},
         {"rae_stopping_time", stats.rae_stopping_time},
         {"stall_prob", stats.stall_prob}};
  if (!stats.r_grid.empty()) {
    j["r_grid"] = stats.r_grid;
    j["mean_undecoded"] = stats.mean_undecoded;
  }
  return j;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "d,objective,residual,theorem2_ok\n";
  for (const SweepRow& row : rows) {
    out += std::to_string(row.d);
    out += ',';
    out += format_double(row.objective);
    out += ',';
    out += format_double(std::max(row.residual_support, row.residual_off_support));
    out += ',';
    out += row.theorem2_ok && row.converged ? "1" : "0";
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace rae
