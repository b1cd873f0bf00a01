#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rae/asymptotics.hpp"
#include "rae/distribution.hpp"
#include "rae/quadrature.hpp"

namespace rae {

// Minimizes f over the d-dimensional probability simplex and certifies the
// result through the exact optimality conditions: -df/dp_i = f(p*) on the
// support and <= f(p*) off it.

struct SolverConfig {
  int quad_order = 96;
  double residual_tol = 1e-10;     // certificate target
  double phase1_tol = 1e-4;        // Frank-Wolfe gap target for mirror descent
  int phase1_max_iters = 50000;
  int phase2_max_changes = 100;    // active-set grow/shrink budget
  double support_threshold = 1e-9; // reporting threshold for support membership
  bool warm_start_skips_phase1 = true;
};

struct KktCertificate {
  double lambda = 0.0;                // f(p); equals the equality multiplier
  double residual_support = 0.0;      // max_{i in S} |-df/dp_i - f|
  double residual_off_support = 0.0;  // max_{i not in S} max(0, -df/dp_i - f)
  std::vector<double> multipliers;    // mu_i = df/dp_i + lambda
  bool divergent_pull = false;        // an off-support component has -df/dp_i = +inf
  bool passing = false;

  static constexpr double kResidualTol = 1e-10;
};

struct OptimizationResult {
  DegreeDistribution dist;
  double objective = 0.0;
  std::vector<std::size_t> support;
  KktCertificate certificate;
  MonotonicityReport monotonicity;
  bool theorem2_ok = false;  // p1 > 0 and g strictly increasing
  bool converged = false;    // certificate passed within the budgets
  int phase1_iters = 0;
  int phase2_changes = 0;
  SolverConfig config;
};

// Two-phase solve: entropic mirror descent over the full simplex, then
// Newton on the active set with grow/shrink driven by the KKT slacks.
// Deterministic for a fixed config and start.
OptimizationResult optimize_degree_distribution(
    std::size_t d, const SolverConfig& config = {},
    const std::optional<DegreeDistribution>& start = std::nullopt);

// Certificate for an arbitrary distribution (support from the reporting
// threshold). Throws divergence_error if the objective itself diverges.
KktCertificate kkt_certificate(const DegreeDistribution& dist,
                               const QuadratureRule& rule = default_rule(),
                               double support_threshold = DegreeDistribution::kSupportThreshold);

// -df/dp_D of dist embedded in dimension D with zeros:
// D \int_0^1 t^{D-1} (-log(1-t)) / p'(t)^2 dt.
double extension_derivative(const DegreeDistribution& dist, std::size_t big_d,
                            const QuadratureRule& rule = default_rule());

// Analytic lower bound H_D / m_p on the extension derivative, where
// m_p = p'(1)^2 bounds p'(t)^2 and H_D is the D-th harmonic number.
double extension_lower_bound(const DegreeDistribution& dist, std::size_t big_d);

// True iff adding mass at degree big_d > d would strictly improve the
// certified optimum (the off-support condition fails at big_d).
bool support_extension_test(const OptimizationResult& result, std::size_t big_d,
                            const QuadratureRule& rule = default_rule());

struct SweepRow {
  std::size_t d = 0;
  double objective = 0.0;
  double residual_support = 0.0;
  double residual_off_support = 0.0;
  bool theorem2_ok = false;
  bool converged = false;
};

// Optimize across ascending d values, warm-starting each from the previous
// optimum. Non-converged entries are flagged; the sweep continues.
std::vector<SweepRow> sweep_optimize(const std::vector<std::size_t>& ds,
                                     const SolverConfig& config = {},
                                     std::vector<OptimizationResult>* results = nullptr);

}  // namespace rae
