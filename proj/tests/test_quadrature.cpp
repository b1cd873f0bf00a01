#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rae/distribution.hpp"
#include "rae/errors.hpp"
#include "rae/quadrature.hpp"
#include "rae/rng.hpp"
#include "test_util.hpp"

using namespace rae;
using namespace rae::test;

TEST_CASE("rule structure invariants") {
  for (const int order : {2, 16, 48, 96, 192, 512}) {
    const auto rule = build_log_kernel_rule(order);
    REQUIRE(rule.nodes.size() == rule.weights.size());
    double wsum = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      CHECK(rule.nodes[j] >= 0.0);
      CHECK(rule.nodes[j] < 1.0);
      if (j > 0) CHECK(rule.nodes[j] > rule.nodes[j - 1]);
      CHECK(rule.weights[j] > 0.0);
      wsum += rule.weights[j];
    }
    CHECK(std::abs(wsum - 1.0) <= 1e-12);  // \int_0^1 -log(1-t) dt = 1
  }
  CHECK_THROWS_AS(build_log_kernel_rule(1), validation_error);
  CHECK_THROWS_AS(build_log_kernel_rule(513), capability_error);
}

TEST_CASE("kernel moments are exact at the default order") {
  // \int_0^1 t^m (-log(1-t)) dt = H_{m+1} / (m+1).
  const auto& rule = default_rule();
  for (const int m : {0,  1,  2,  3,   5,   8,    13,   21,   34,  55,
                      89, 144, 512, 1000, 4096, 10000, 20000}) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      acc += rule.weights[j] * std::pow(rule.nodes[j], double(m));
    CHECK(rel_err(acc, harmonic(m + 1) / (m + 1)) < 1e-13);
  }
}

TEST_CASE("named integrals") {
  const auto& rule = default_rule();
  CHECK(integrate_log_kernel(rule, [](double) { return 1.0; }) == doctest::Approx(1.0));
  CHECK(rel_err(integrate_log_kernel(rule, [](double t) { return t; }), 0.75) < 1e-13);
  const double pi2_12 = std::numbers::pi * std::numbers::pi / 12.0;
  CHECK(std::abs(integrate_log_kernel(rule, [](double t) { return 0.5 / t; }) - pi2_12) < 1e-13);
  CHECK(integrate_log_kernel(rule, [](double) { return 0.0; }) == 0.0);
  // Single-degree code: expected draws per symbol, the coupon collector rate.
  CHECK(integrate_log_kernel(rule, [](double) { return 1.0; }) == doctest::Approx(1.0));
  CHECK(rel_err(integrate_log_kernel(rule, [](double t) { return t; }), 0.75) < 1e-12);
}

TEST_CASE("non-finite integrand reports the node") {
  const auto rule = build_log_kernel_rule(16);
  try {
    integrate_log_kernel(rule, [](double t) { return t > 0.5 ? 1.0 / 0.0 : 1.0; });
    FAIL("expected evaluation_error");
  } catch (const evaluation_error& e) {
    CHECK(e.node() > 0.5);
  }
}

TEST_CASE("doubling the order leaves benchmark integrals unchanged") {
  const auto r96 = build_log_kernel_rule(96);
  const auto r192 = build_log_kernel_rule(192);
  const std::vector<std::vector<double>> dists = {
      {1.0}, {0.0, 1.0}, {0.15547, 0.84453}, {0.205, 0.727, 0, 0, 0, 0, 0, 0, 0, 0.068}};
  for (const auto& w : dists) {
    const auto dist = make_distribution(w);
    const auto phi = [&](double t) { return 1.0 / eval_p_prime(dist, t); };
    const double a = integrate_log_kernel(r96, phi);
    const double b = integrate_log_kernel(r192, phi);
    CHECK(rel_err(a, b) < 1e-10);
  }
}

TEST_CASE("rule agrees with the tanh-sinh cross-check on random 1/p' integrands") {
  Xoshiro256 rng(31, 0);
  const auto& rule = default_rule();
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t d = 2 + rng.below(49);
    const auto dist = make_distribution(random_simplex(rng, d));
    const auto phi = [&](double t) { return 1.0 / eval_p_prime(dist, t); };
    const double a = integrate_log_kernel(rule, phi);
    const double b = integrate_log_kernel_adaptive(phi);
    CHECK(rel_err(a, b) < 1e-9);
  }
}

TEST_CASE("squared-degree integrands from the derivative formulas") {
  // 1/p'(t)^m factors carry one kernel power each; same rule applies.
  const auto& rule = default_rule();
  const double single = integrate_log_kernel(rule, [](double) { return 1.0; });
  CHECK(single == doctest::Approx(1.0));
  const double second = integrate_log_kernel(rule, [](double t) { return t; });
  CHECK(rel_err(second, 0.75) < 1e-12);
}

TEST_CASE("gauss-legendre base rule integrates polynomials exactly") {
  const auto& [x, w] = gauss_legendre(16);
  for (int k = 0; k <= 31; ++k) {
    double acc = 0.0;
    for (int j = 0; j < 16; ++j) acc += w[j] * std::pow(x[j], k);
    const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
    CHECK(std::abs(acc - exact) < 1e-13);
  }
}

TEST_CASE("smooth panel integration") {
  const double got = integrate_smooth([](double t) { return std::cos(t); }, 0.0, 1.0, 4, 16);
  CHECK(rel_err(got, std::sin(1.0)) < 1e-14);
}
