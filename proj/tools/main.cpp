// rae: degree-distribution optimization and Monte Carlo toolkit for the
// random access expectation of LT / fully symmetric codes under peeling.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rae/asymptotics.hpp"
#include "rae/bounds.hpp"
#include "rae/errors.hpp"
#include "rae/kernels.hpp"
#include "rae/optimizer.hpp"
#include "rae/serialization.hpp"
#include "rae/simulator.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitIo = 3;

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

std::vector<std::size_t> log_spaced(std::size_t d_min, std::size_t d_max, int per_decade) {
  std::set<std::size_t> ds = {d_min, d_max};
  const double lo = std::log10(static_cast<double>(d_min));
  const double hi = std::log10(static_cast<double>(d_max));
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) * per_decade)));
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const auto d = static_cast<std::size_t>(std::llround(std::pow(10.0, x)));
    if (d >= d_min && d <= d_max) ds.insert(d);
  }
  return {ds.begin(), ds.end()};
}

struct CommonOpts {
  int quad_order = 96;
  double tol = 1e-10;
  std::string out_dir = ".";
};

rae::SolverConfig make_config(const CommonOpts& c) {
  rae::SolverConfig cfg;
  cfg.quad_order = c.quad_order;
  cfg.residual_tol = c.tol;
  return cfg;
}

void print_result(const rae::OptimizationResult& res) {
  std::printf("d=%zu  f=%.10f  support={", res.dist.d(), res.objective);
  for (std::size_t i = 0; i < res.support.size(); ++i)
    std::printf("%s%zu", i ? "," : "", res.support[i]);
  std::printf("}  residuals=(%.2e, %.2e)  theorem2_ok=%s\n",
              res.certificate.residual_support, res.certificate.residual_off_support,
              res.theorem2_ok ? "true" : "false");
  for (const std::size_t i : res.support) std::printf("  p_%zu = %.8f\n", i, res.dist.p(i));
}

rae::DegreeDistribution resolve_dist(std::size_t d, const std::string& dist_file,
                                     const CommonOpts& common, bool* certified) {
  if (!dist_file.empty()) {
    if (certified != nullptr) *certified = true;
    return rae::load_distribution(dist_file);
  }
  auto res = rae::optimize_degree_distribution(d, make_config(common));
  if (certified != nullptr) *certified = res.converged;
  return res.dist;
}

int cmd_optimize(std::size_t d, const CommonOpts& common) {
  const auto res = rae::optimize_degree_distribution(d, make_config(common));
  print_result(res);
  const std::string path = out_path(common.out_dir, "optimize_d" + std::to_string(d) + ".json");
  rae::write_file_atomic(path, rae::result_to_json(res).dump(2) + "\n");
  // Also emit the distribution in the loadable schema for verify/curve/simulate.
  const std::string dist_path = out_path(common.out_dir, "dist_d" + std::to_string(d) + ".json");
  rae::write_file_atomic(dist_path, rae::dist_to_json(res.dist).dump(2) + "\n");
  std::printf("wrote %s and %s\n", path.c_str(), dist_path.c_str());
  if (!res.converged) {
    std::fprintf(stderr, "optimization did not reach the residual target %.1e\n", common.tol);
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_sweep(const std::vector<std::size_t>& ds, const CommonOpts& common) {
  const auto rows = rae::sweep_optimize(ds, make_config(common));
  const std::string csv_path = out_path(common.out_dir, "sweep.csv");
  rae::write_file_atomic(csv_path, rae::sweep_to_csv(rows));
  json meta{{"lower_bound_pi_over_4", std::numbers::pi / 4.0},
            {"d_values", ds},
            {"rows", rows.size()}};
  const std::string json_path = out_path(common.out_dir, "sweep.json");
  rae::write_file_atomic(
      json_path,
      rae::with_metadata(meta, rae::solver_config_to_json(make_config(common))).dump(2) + "\n");
  bool all_ok = true;
  for (const auto& row : rows) {
    std::printf("d=%-6zu f=%.8f residual=%.2e %s\n", row.d, row.objective,
                std::max(row.residual_support, row.residual_off_support),
                row.converged ? "" : "NOT CONVERGED");
    all_ok = all_ok && row.converged;
  }
  std::printf("wrote %s and %s\n", csv_path.c_str(), json_path.c_str());
  return all_ok ? kExitOk : kExitNotConverged;
}

int cmd_curve(std::size_t d, const std::string& dist_file, double r_max, int points,
              const CommonOpts& common) {
  bool certified = true;
  const auto dist = resolve_dist(d, dist_file, common, &certified);
  const auto rule = rae::build_log_kernel_rule(common.quad_order);
  if (r_max <= 0.0) r_max = rae::default_r_max(dist);
  const auto curve = rae::decoding_curve(dist, r_max, points, rule);
  const std::string base = dist_file.empty() ? "curve_d" + std::to_string(d) : "curve";
  const std::string csv_path = out_path(common.out_dir, base + ".csv");
  const std::string json_path = out_path(common.out_dir, base + ".json");
  rae::write_file_atomic(csv_path, rae::curve_to_csv(curve));
  json cfg = rae::solver_config_to_json(make_config(common));
  cfg["r_max"] = r_max;
  cfg["points"] = points;
  rae::write_file_atomic(json_path, rae::curve_sidecar(curve, dist, cfg).dump(2) + "\n");
  std::printf("area=%.8f monotone=%s r_max=%.4f\nwrote %s and %s\n", curve.area,
              curve.monotone_g ? "true" : "false", r_max, csv_path.c_str(), json_path.c_str());
  return certified ? kExitOk : kExitNotConverged;
}

int cmd_simulate(std::size_t d, const std::string& dist_file, const rae::SimConfig& sim,
                 double r_max, int points, const CommonOpts& common) {
  bool certified = true;
  const auto dist = resolve_dist(d, dist_file, common, &certified);
  rae::SimConfig cfg = sim;
  if (r_max <= 0.0) r_max = rae::default_r_max(dist);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = r_max * i / (points - 1);
  const auto stats = rae::average_decoding_curve(dist, cfg, grid);

  json config{{"k", cfg.k},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"arrival",
               cfg.arrival == rae::ArrivalModel::sequential ? "sequential" : "poissonized"},
              {"cutoff_factor", cfg.cutoff_factor},
              {"r_max", r_max},
              {"points", points},
              {"dist", rae::dist_to_json(dist)}};
  const std::string stats_path =
      out_path(common.out_dir, "simulate_k" + std::to_string(cfg.k) + ".json");
  rae::write_file_atomic(stats_path,
                         rae::with_metadata(rae::stats_to_json(stats), config).dump(2) + "\n");
  std::printf("k=%u trials=%u rae=%.6f stderr=%.6f stall_prob=%.4f\nwrote %s\n", stats.k,
              stats.trials, stats.rae_estimate, stats.rae_stderr, stats.stall_prob,
              stats_path.c_str());
  if (cfg.keep_trajectories > 0) {
    const std::string traj_path =
        out_path(common.out_dir, "trajectories_k" + std::to_string(cfg.k) + ".csv");
    rae::write_file_atomic(traj_path, rae::trajectories_to_csv(stats));
    std::printf("wrote %s\n", traj_path.c_str());
  }
  return certified ? kExitOk : kExitNotConverged;
}

int cmd_d2(const CommonOpts& common) {
  const auto sol = rae::solve_d2();
  std::printf("closed form: p1=%.8f p2=%.8f f=%.8f\n", sol.p1, sol.p2, sol.f);
  const auto res = rae::optimize_degree_distribution(2, make_config(common));
  std::printf("optimizer:   p1=%.8f p2=%.8f f=%.8f (residuals %.2e, %.2e)\n", res.dist.p(1),
              res.dist.p(2), res.objective, res.certificate.residual_support,
              res.certificate.residual_off_support);
  std::printf("difference:  |dp1|=%.2e |df|=%.2e\n", std::abs(sol.p1 - res.dist.p(1)),
              std::abs(sol.f - res.objective));
  return res.converged ? kExitOk : kExitNotConverged;
}

int cmd_verify(const std::string& dist_file, const CommonOpts& common) {
  const auto dist = rae::load_distribution(dist_file);
  const auto rule = rae::build_log_kernel_rule(common.quad_order);
  const auto cert = rae::kkt_certificate(dist, rule);
  const auto bound = rae::check_lower_bound(dist, rule);
  std::printf("f = %.10f\n", cert.lambda);
  std::printf("residual_support     = %.3e\n", cert.residual_support);
  std::printf("residual_off_support = %.3e%s\n", cert.residual_off_support,
              cert.divergent_pull ? " (divergent pull toward p1 > 0)" : "");
  std::printf("certificate          = %s\n", cert.passing ? "PASSING" : "not passing");
  std::printf("lower bound pi/4     = %.10f, gap = %.6f\n", rae::LowerBoundReport::kBound,
              bound.gap);
  return cert.passing ? kExitOk : kExitNotConverged;
}

int cmd_bound(std::size_t d, const std::string& dist_file, const CommonOpts& common) {
  bool certified = true;
  const auto dist = resolve_dist(d, dist_file, common, &certified);
  const auto bound = rae::check_lower_bound(dist, rae::build_log_kernel_rule(common.quad_order));
  std::printf("f = %.10f\npi/4 = %.10f\ngap = %.6f\nholds = %s\n", bound.objective,
              rae::LowerBoundReport::kBound, bound.gap, bound.holds ? "true" : "false");
  return bound.holds && certified ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random access expectation toolkit for LT / fully symmetric codes"};
  app.require_subcommand(1);

  CommonOpts common;
  std::size_t d = 0;
  std::string dist_file;
  double r_max = 0.0;
  int points = 201;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--quad-order", common.quad_order, "quadrature order (default 96)");
    sub->add_option("--tol", common.tol, "KKT residual target (default 1e-10)");
    sub->add_option("--out", common.out_dir, "output directory (default .)");
  };

  auto* opt = app.add_subcommand("optimize", "solve for the optimal degree distribution");
  opt->add_option("--d", d, "maximum degree")->required();
  add_common(opt);

  auto* sweep = app.add_subcommand("sweep", "optimize across a log-spaced grid of d values");
  std::size_t d_min = 2, d_max = 1000;
  int per_decade = 8;
  std::vector<std::size_t> d_list;
  sweep->add_option("--d-min", d_min, "smallest d (default 2)");
  sweep->add_option("--d-max", d_max, "largest d (default 1000)");
  sweep->add_option("--points-per-decade", per_decade, "grid density (default 8)");
  sweep->add_option("--d-list", d_list, "explicit comma-separated d values")->delimiter(',');
  add_common(sweep);

  auto* curve = app.add_subcommand("curve", "emit the asymptotic decoding curve");
  curve->add_option("--d", d, "maximum degree (optimizes first)");
  curve->add_option("--dist", dist_file, "distribution JSON file");
  curve->add_option("--r-max", r_max, "largest r (default: smallest r with 1-s < 1e-8)");
  curve->add_option("--points", points, "grid points (default 201)");
  add_common(curve);

  auto* sim = app.add_subcommand("simulate", "finite-k Monte Carlo decoding trajectories");
  rae::SimConfig sim_cfg;
  std::string arrival = "sequential";
  sim->add_option("--d", d, "maximum degree (optimizes first)");
  sim->add_option("--dist", dist_file, "distribution JSON file");
  sim->add_option("--k", sim_cfg.k, "information symbols")->required();
  sim->add_option("--trials", sim_cfg.trials, "Monte Carlo trials")->required();
  sim->add_option("--seed", sim_cfg.seed, "RNG seed (required for reproducibility)")->required();
  sim->add_option("--arrival", arrival, "sequential | poissonized")
      ->check(CLI::IsMember({"sequential", "poissonized"}));
  sim->add_option("--cutoff", sim_cfg.cutoff_factor, "stop a trial after cutoff*k draws");
  sim->add_option("--keep-trajectories", sim_cfg.keep_trajectories,
                  "retain this many per-trial curves in the CSV");
  sim->add_option("--r-max", r_max, "largest grid r");
  sim->add_option("--points", points, "grid points (default 201)");
  add_common(sim);

  auto* d2 = app.add_subcommand("d2", "closed-form d=2 solution vs the optimizer");
  add_common(d2);

  auto* verify = app.add_subcommand("verify", "KKT certificate for a distribution file");
  verify->add_option("dist", dist_file, "distribution JSON file")->required();
  add_common(verify);

  auto* bound = app.add_subcommand("bound", "pi/4 lower bound report");
  bound->add_option("--d", d, "maximum degree (optimizes first)");
  bound->add_option("--dist", dist_file, "distribution JSON file");
  add_common(bound);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (opt->parsed()) return cmd_optimize(d, common);
    if (sweep->parsed()) {
      if (d_list.empty()) d_list = log_spaced(d_min, d_max, per_decade);
      return cmd_sweep(d_list, common);
    }
    if (curve->parsed()) {
      if (d == 0 && dist_file.empty()) throw rae::validation_error("curve needs --d or --dist");
      return cmd_curve(d, dist_file, r_max, points, common);
    }
    if (sim->parsed()) {
      if (d == 0 && dist_file.empty())
        throw rae::validation_error("simulate needs --d or --dist");
      sim_cfg.arrival = arrival == "sequential" ? rae::ArrivalModel::sequential
                                                : rae::ArrivalModel::poissonized;
      return cmd_simulate(d, dist_file, sim_cfg, r_max, points, common);
    }
    if (d2->parsed()) return cmd_d2(common);
    if (verify->parsed()) return cmd_verify(dist_file, common);
    if (bound->parsed()) {
      if (d == 0 && dist_file.empty()) throw rae::validation_error("bound needs --d or --dist");
      return cmd_bound(d, dist_file, common);
    }
  } catch (const rae::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const rae::capability_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const rae::divergence_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}
