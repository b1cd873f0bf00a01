// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rae/asymptotics.hpp"
#include "rae/bounds.hpp"
#include "rae/linalg.hpp"
#include "rae/optimizer.hpp"
#include "rae/quadrature.hpp"
#include "rae/rng.hpp"
#include "rae/simulator.hpp"

using namespace rae;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void expect_close(double got, double want, double tol, const std::string& name) {
    if (!(std::abs(got - want) <= tol)) {
      ok = false;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s = %.8g, want %.8g +- %.2g", name.c_str(), got, want,
                    tol);
      detail += (detail.empty() ? "" : "; ") + std::string(buf);
    }
  }
};

struct Context {
  std::optional<OptimizationResult> opt2, opt10, opt100;
  std::vector<SweepRow> sweep_rows;
  std::vector<OptimizationResult> sweep_results;

  const OptimizationResult& at(std::size_t d) {
    auto& slot = d == 2 ? opt2 : d == 10 ? opt10 : opt100;
    if (!slot.has_value()) slot = optimize_degree_distribution(d);
    return *slot;
  }
  void ensure_sweep() {
    if (!sweep_rows.empty()) return;
    std::vector<std::size_t> ds = {2, 3, 4, 5, 6, 8, 11, 14, 19, 25, 34, 45,
                                   59, 79, 104, 138, 184, 244, 323, 429, 568, 754, 1000};
    sweep_rows = sweep_optimize(ds, {}, &sweep_results);
  }
};

std::vector<double> random_simplex(Xoshiro256& rng, std::size_t d) {
  std::vector<double> p(d);
  double sum = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> random_interior(Xoshiro256& rng, std::size_t d) {
  // Floored away from the boundary: near-zero coordinates push the Hessian
  // condition number past double precision and invalidate h = 1e-5 central
  // differences.
  auto p = random_simplex(rng, d);
  double sum = 0.0;
  for (double& v : p) {
    v = std::max(v, 5e-2 / static_cast<double>(d));
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

// D H D with positive diagonal D preserves positive definiteness and keeps
// the factorization numerically meaningful. The family is Hilbert-like:
// lambda_min/lambda_max decays exponentially in dimension and falls below
// double resolution near n = 14, beyond which the decidable statement is
// lambda_min > -1e-12 on the equilibrated matrix.
bool positive_definite_within_doubles(const Matrix& h) {
  const std::size_t n = h.n();
  Matrix scaled(n);
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = 1.0 / std::sqrt(h(i, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) = h(i, j) * scale[i] * scale[j];
  if (n > 13)
    for (std::size_t i = 0; i < n; ++i) scaled(i, i) += 1e-12;
  return cholesky_factor(scaled);
}

// --- criteria -------------------------------------------------------------

Check c1_d2_optimum(Context& ctx) {
  Check c;
  const auto& res = ctx.at(2);
  const auto sol = solve_d2();
  c.expect(res.converged && res.certificate.passing, "optimizer certificate not passing");
  c.expect_close(res.dist.p(1), 0.15547, 5e-5, "optimizer p1");
  c.expect_close(res.dist.p(2), 0.84453, 5e-5, "optimizer p2");
  c.expect_close(res.objective, 0.7939, 5e-4, "optimizer f");
  c.expect_close(sol.p1, 0.15547, 5e-5, "closed-form p1");
  c.expect_close(sol.p2, 0.84453, 5e-5, "closed-form p2");
  c.expect_close(sol.f, 0.7939, 5e-4, "closed-form f");
  return c;
}

Check c2_boundary_constants(Context&) {
  Check c;
  c.expect_close(objective(make_distribution({1.0})), 1.0, 1e-10, "f(delta_1)");
  c.expect_close(objective(make_distribution({0.0, 1.0})), kPi * kPi / 12.0, 1e-8,
                 "f(delta_2)");
  return c;
}

Check c3_lower_bound(Context& ctx) {
  Check c;
  Xoshiro256 rng(1001, 0);
  double worst = 1e9;
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t d = 2 + rng.below(49);
    const double f = objective(make_distribution(random_simplex(rng, d)));
    worst = std::min(worst, f - kPi / 4.0);
    if (f < kPi / 4.0 - 1e-9) {
      c.expect(false, "random point below pi/4 at rep " + std::to_string(rep));
      break;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "min gap over 10^4 points: %.3e", worst);
  c.detail = c.detail.empty() ? buf : c.detail;
  ctx.ensure_sweep();
  for (const auto& row : ctx.sweep_rows)
    c.expect(row.objective >= kPi / 4.0 - 1e-9,
             "certified optimum below bound at d=" + std::to_string(row.d));
  for (const std::size_t d : {2u, 10u, 100u})
    c.expect(ctx.at(d).objective >= kPi / 4.0 - 1e-9,
             "optimum below bound at d=" + std::to_string(d));
  return c;
}

Check c4_d10(Context& ctx) {
  Check c;
  const auto& res = ctx.at(10);
  c.expect(res.converged, "not converged");
  c.expect(res.support == std::vector<std::size_t>{1, 2, 10},
           "support is not {1,2,10}");
  c.expect_close(res.dist.p(1), 0.205, 2e-3, "p1");
  c.expect_close(res.dist.p(2), 0.727, 2e-3, "p2");
  c.expect_close(res.dist.p(10), 0.067, 2e-3, "p10");
  c.expect_close(res.objective, 0.7879, 5e-4, "f");
  return c;
}

Check c5_d100(Context& ctx) {
  Check c;
  const auto& res = ctx.at(100);
  c.expect(res.converged, "not converged");
  c.expect(res.support == std::vector<std::size_t>{1, 2, 14, 15, 100},
           "support is not {1,2,14,15,100}");
  c.expect_close(res.dist.p(1), 0.19363, 1e-4, "p1");
  c.expect_close(res.dist.p(2), 0.75839, 1e-4, "p2");
  c.expect_close(res.dist.p(14), 0.00004, 1e-5, "p14");
  c.expect_close(res.dist.p(15), 0.04198, 1e-4, "p15");
  c.expect_close(res.dist.p(100), 0.00596, 1e-4, "p100");
  c.expect(res.certificate.residual_support < 1e-10, "support residual >= 1e-10");
  c.expect(res.certificate.residual_off_support < 1e-10, "off-support residual >= 1e-10");
  return c;
}

Check c6_sweep(Context& ctx) {
  Check c;
  ctx.ensure_sweep();
  for (std::size_t i = 0; i < ctx.sweep_rows.size(); ++i) {
    const auto& row = ctx.sweep_rows[i];
    c.expect(row.converged, "d=" + std::to_string(row.d) + " not converged");
    if (i > 0)
      c.expect(row.objective <= ctx.sweep_rows[i - 1].objective + 1e-12,
               "objective increased at d=" + std::to_string(row.d));
  }
  const auto& last = ctx.sweep_rows.back();
  c.expect(last.d == 1000, "sweep does not end at d=1000");
  c.expect(last.objective >= kPi / 4.0 && last.objective <= 0.7879,
           "d=1000 objective outside [pi/4, 0.7879]");
  char buf[64];
  std::snprintf(buf, sizeof buf, "f(d=1000) = %.6f", last.objective);
  if (c.ok) c.detail = buf;
  return c;
}

Check c7_theorem2(Context& ctx) {
  Check c;
  ctx.ensure_sweep();
  for (const auto& row : ctx.sweep_rows)
    c.expect(row.theorem2_ok, "theorem2_ok false at d=" + std::to_string(row.d));
  const auto& largest = ctx.sweep_results.back();
  c.expect_close(largest.monotonicity.min_derivative, 0.87, 0.02, "min g'");
  c.expect_close(largest.monotonicity.argmin_t, 0.385, 0.01, "argmin t");
  return c;
}

Check c8_derivatives(Context&) {
  Check c;
  Xoshiro256 rng(1002, 0);
  const auto& rule = default_rule();
  double worst_grad = 0.0, worst_hess = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t d = 2 + rng.below(19);
    const auto p = random_interior(rng, d);
    std::vector<double> grad(d), up(d), dn(d), probe(p);
    gradient_raw(p, rule, grad);
    const double h = 1e-6;
    for (std::size_t i = 0; i < d; ++i) {
      probe[i] = p[i] + h;
      const double fu = objective_raw(probe, rule);
      probe[i] = p[i] - h;
      const double fd = objective_raw(probe, rule);
      probe[i] = p[i];
      worst_grad = std::max(worst_grad,
                            std::abs(grad[i] - (fu - fd) / (2 * h)) / std::abs(grad[i]));
    }
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), 1);
    const Matrix hess = hessian_raw(p, idx, rule);
    if (rep % 5 == 0) {
      for (std::size_t j = 0; j < d; ++j) {
        probe[j] = p[j] + h;
        gradient_raw(probe, rule, up);
        probe[j] = p[j] - h;
        gradient_raw(probe, rule, dn);
        probe[j] = p[j];
        for (std::size_t i = 0; i < d; ++i)
          worst_hess =
              std::max(worst_hess, std::abs(hess(i, j) - (up[i] - dn[i]) / (2 * h)) /
                                       std::abs(hess(i, j)));
      }
    }
    c.expect(positive_definite_within_doubles(hess),
             "hessian not positive definite at rep " + std::to_string(rep));
    std::vector<double> dir(d);
    for (double& v : dir) v = rng.uniform() - 0.5;
    double quad = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) quad += dir[a] * hess(a, b) * dir[b];
    c.expect(quad > 0.0, "negative curvature direction at rep " + std::to_string(rep));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max rel err: grad %.2e, hess %.2e", worst_grad, worst_hess);
  c.expect(worst_grad < 1e-6, std::string("gradient FD mismatch: ") + buf);
  c.expect(worst_hess < 1e-5, std::string("hessian FD mismatch: ") + buf);
  if (c.ok) c.detail = buf;
  return c;
}

Check c9_kkt_algebra(Context& ctx) {
  Check c;
  ctx.ensure_sweep();
  std::vector<const OptimizationResult*> certified;
  for (const std::size_t d : {2u, 10u, 100u}) certified.push_back(&ctx.at(d));
  for (const auto& res : ctx.sweep_results) certified.push_back(&res);
  const auto& rule = default_rule();
  for (const auto* res : certified) {
    if (!res->certificate.passing) continue;
    // The common on-support derivative value must equal f itself.
    const Gradient grad = gradient(res->dist, rule);
    double lambda_hat = 0.0;
    for (const std::size_t i : res->support) lambda_hat += -grad.value[i - 1];
    lambda_hat /= static_cast<double>(res->support.size());
    c.expect(std::abs(lambda_hat - res->objective) < 1e-10,
             "multiplier != f at d=" + std::to_string(res->dist.d()));
    for (std::size_t i = 1; i <= res->dist.d(); ++i) {
      const double mu = res->certificate.multipliers[i - 1];
      c.expect(mu * res->dist.p(i) <= 1e-12,
               "complementary slackness at d=" + std::to_string(res->dist.d()));
      if (!std::isinf(mu)) c.expect(mu >= -1e-10, "negative multiplier at certified optimum");
    }
  }
  return c;
}

Check c10_support_extension(Context& ctx) {
  Check c;
  const auto& res = ctx.at(2);
  std::size_t found = 0;
  for (std::size_t big = 4; big <= 1000; big *= 2) {
    if (support_extension_test(res, big) &&
        extension_lower_bound(res.dist, big) > res.objective) {
      found = big;
      break;
    }
  }
  c.expect(found != 0 && found <= 1000, "no improving extension dimension found below 1000");
  if (found != 0) {
    c.expect(extension_derivative(res.dist, found) > res.objective + 1e-12,
             "extension derivative does not exceed f");
    char buf[96];
    std::snprintf(buf, sizeof buf, "D = %zu, pull %.4f > f %.4f, bound %.4f", found,
                  extension_derivative(res.dist, found), res.objective,
                  extension_lower_bound(res.dist, found));
    c.detail = buf;
  }
  return c;
}

Check c11_simulation(Context& ctx) {
  Check c;
  const auto dist = ctx.at(10).dist;
  const double target = 0.7879;
  std::vector<double> gaps;
  for (const auto& [k, trials] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {10, 4000}, {100, 1000}, {1000, 200}}) {
    SimConfig config{.k = k, .trials = trials, .seed = 7, .arrival = ArrivalModel::sequential};
    const auto stats = estimate_rae(dist, config);
    gaps.push_back(std::abs(stats.rae_estimate - target));
    if (k == 1000) {
      c.expect(std::abs(stats.rae_estimate - target) < 0.01,
               "k=1000 estimate off by " + std::to_string(stats.rae_estimate - target));
      c.expect(stats.rae_stderr < 0.003, "k=1000 stderr too large");
      char buf[96];
      std::snprintf(buf, sizeof buf, "rae(k=1000) = %.5f +- %.5f; gaps %.4f > %.4f > %.4f",
                    stats.rae_estimate, stats.rae_stderr, gaps[0], gaps[1],
                    std::abs(stats.rae_estimate - target));
      c.detail = buf;
    }
  }
  c.expect(gaps[0] > gaps[1] && gaps[1] > gaps[2], "k-gap sequence not strictly decreasing");
  return c;
}

Check c12_decoder_oracle(Context&) {
  Check c;
  Xoshiro256 rng(1003, 0);
  const auto rescan = [](std::uint32_t k, const std::vector<CodedSymbol>& symbols) {
    std::vector<std::uint8_t> decoded(k, 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& sym : symbols) {
        std::uint32_t residual = 0, last = 0;
        for (const std::uint32_t idx : sym.support)
          if (!decoded[idx]) {
            ++residual;
            last = idx;
          }
        if (residual == 1) {
          decoded[last] = 1;
          changed = true;
        }
      }
    }
    return decoded;
  };
  const auto make_instance = [&](std::uint32_t k, std::uint32_t n) {
    std::vector<CodedSymbol> symbols(n);
    for (auto& sym : symbols) {
      const std::uint32_t w = 1 + static_cast<std::uint32_t>(rng.below(k));
      std::vector<std::uint32_t> pool(k);
      std::iota(pool.begin(), pool.end(), 0);
      for (std::uint32_t j = 0; j < w; ++j) std::swap(pool[j], pool[j + rng.below(k - j)]);
      sym.support.assign(pool.begin(), pool.begin() + w);
    }
    return symbols;
  };
  const auto run = [](std::uint32_t k, const std::vector<CodedSymbol>& symbols,
                      const std::vector<std::uint64_t>& message) {
    PeelingState state(k, true);
    for (const auto& sym : symbols) {
      std::uint64_t payload = 0;
      for (const std::uint32_t idx : sym.support) payload ^= message[idx];
      state.insert(sym, payload);
    }
    return state;
  };

  for (int rep = 0; rep < 1000 && c.ok; ++rep) {
    const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.below(11));
    const auto symbols = make_instance(k, 1 + static_cast<std::uint32_t>(rng.below(2 * k)));
    std::vector<std::uint64_t> message(k);
    for (auto& m : message) m = rng.next();
    const auto want = rescan(k, symbols);
    const auto state = run(k, symbols, message);
    for (std::uint32_t i = 0; i < k; ++i) {
      c.expect((state.decoded(i) ? 1 : 0) == want[i], "structural/oracle mismatch");
      if (state.decoded(i)) c.expect(state.value(i) == message[i], "payload mismatch");
    }
  }

  // Exhaustive insertion orders for small blocklengths.
  for (int rep = 0; rep < 60 && c.ok; ++rep) {
    const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.below(5));  // k <= 6
    const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(6));  // up to 6! orders
    const auto symbols = make_instance(k, n);
    const auto want = rescan(k, symbols);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
      PeelingState state(k);
      for (const std::size_t i : order) state.insert(symbols[i]);
      for (std::uint32_t i = 0; i < k; ++i)
        c.expect((state.decoded(i) ? 1 : 0) == want[i], "order-dependent outcome");
      if (!c.ok) break;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return c;
}

Check c13_curve_shape(Context& ctx) {
  Check c;
  for (const std::size_t d : {2u, 10u, 100u}) {
    const auto& res = ctx.at(d);
    const auto curve = decoding_curve(res.dist, default_r_max(res.dist), 101);
    c.expect(curve.monotone_g, "g not strictly increasing at d=" + std::to_string(d));
    for (std::size_t i = 1; i < curve.undecoded_fraction.size(); ++i)
      c.expect(curve.undecoded_fraction[i] < curve.undecoded_fraction[i - 1],
               "curve not strictly decreasing at d=" + std::to_string(d));
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double time_limit_s;
    std::function<Check(Context&)> fn;
  };
  Context ctx;
  const std::vector<Criterion> criteria = {
      {"d=2 optimum, two independent routes", 1.0, c1_d2_optimum},
      {"boundary constants f(delta_1), f(delta_2)", 0.1, c2_boundary_constants},
      {"pi/4 lower bound on 10^4 random points + optima", 30.0, c3_lower_bound},
      {"d=10 optimum", 5.0, c4_d10},
      {"d=100 optimum with certified residuals", 60.0, c5_d100},
      {"sweep d in [2,1000]: monotone, endpoint in range", 1800.0, c6_sweep},
      {"decoding condition holds at optima; min g' footprint", 1800.0, c7_theorem2},
      {"derivative correctness and positive definiteness", 60.0, c8_derivatives},
      {"multiplier equals objective; complementary slackness", 60.0, c9_kkt_algebra},
      {"support extension improves some D <= 1000", 10.0, c10_support_extension},
      {"simulation matches asymptotics at k=1000", 300.0, c11_simulation},
      {"decoder equals oracle; order invariance", 120.0, c12_decoder_oracle},
      {"asymptotic curves strictly decreasing", 60.0, c13_curve_shape},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = criteria[i].fn(ctx);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criteria[i].time_limit_s) {
      check.ok = false;
      check.detail += (check.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%2zu] %-52s %s (%.2fs)%s%s\n", i + 1, criteria[i].name,
                check.ok ? "PASS" : "FAIL", elapsed, check.detail.empty() ? "" : " -- ",
                check.detail.c_str());
    if (!check.ok) ++failures;
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
