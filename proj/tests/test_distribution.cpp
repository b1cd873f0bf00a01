#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rae/distribution.hpp"
#include "rae/errors.hpp"
#include "rae/quadrature.hpp"
#include "rae/rng.hpp"
#include "rae/serialization.hpp"
#include "test_util.hpp"

using namespace rae;
using namespace rae::test;

TEST_CASE("make_distribution normalizes weights") {
  const auto single = make_distribution({1.0});
  CHECK(single.d() == 1);
  CHECK(single.p(1) == 1.0);

  const auto half = make_distribution({1.0, 1.0});
  CHECK(half.p(1) == 0.5);
  CHECK(half.p(2) == 0.5);

  const auto opt = make_distribution({0.15547, 0.84453});
  CHECK(opt.p(1) == doctest::Approx(0.15547).epsilon(1e-12));
  CHECK(opt.p(2) == doctest::Approx(0.84453).epsilon(1e-12));
}

TEST_CASE("make_distribution rejects bad input") {
  CHECK_THROWS_AS(make_distribution({0.0, 0.0}), validation_error);
  CHECK_THROWS_AS(make_distribution({1.0, -0.5}), validation_error);
  CHECK_THROWS_AS(make_distribution({1.0, std::numeric_limits<double>::infinity()}),
                  validation_error);
  CHECK_THROWS_AS(make_distribution({1.0, std::nan("")}), validation_error);
  CHECK_THROWS_AS(make_distribution(std::span<const double>{}), validation_error);
}

TEST_CASE("constructor enforces the sum tolerance without renormalizing") {
  CHECK_THROWS_AS(DegreeDistribution({0.5, 0.5 + 1e-10}), validation_error);
  const DegreeDistribution ok({0.5, 0.5 + 1e-13});
  CHECK(ok.p(2) == 0.5 + 1e-13);
}

TEST_CASE("normalization meets the sum tolerance at d = 10^4") {
  Xoshiro256 rng(21, 0);
  std::vector<double> w(10000);
  for (double& v : w) v = rng.uniform() * 3.0;
  const auto dist = make_distribution(w);
  CHECK(std::abs(stable_sum(dist.probs()) - 1.0) <= DegreeDistribution::kSumTolerance);
}

TEST_CASE("polynomial evaluation") {
  const auto one = make_distribution({1.0});
  for (double t : {0.0, 0.3, 0.77, 1.0}) CHECK(eval_p_prime(one, t) == 1.0);

  const auto deg2 = make_distribution({0.0, 1.0});
  CHECK(eval_p_prime(deg2, 0.5) == doctest::Approx(1.0));
  CHECK(eval_p_double_prime(deg2, 0.9) == doctest::Approx(2.0));

  const auto opt = make_distribution({0.15547, 0.84453});
  CHECK(eval_p_prime(opt, 0.0) == doctest::Approx(0.15547).epsilon(1e-12));

  CHECK_THROWS_AS(eval_p_prime(opt, -0.1), std::domain_error);
  CHECK_THROWS_AS(eval_p(opt, 1.5), std::domain_error);
}

TEST_CASE("horner agrees with naive power sums") {
  Xoshiro256 rng(22, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t d = 1 + rng.below(30);
    const auto dist = make_distribution(random_simplex(rng, d));
    const double t = rng.uniform();
    double p = 0.0, pp = 0.0, ppp = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      p += dist.p(i) * std::pow(t, double(i));
      pp += dist.p(i) * i * std::pow(t, double(i - 1));
      if (i >= 2) ppp += dist.p(i) * i * (i - 1) * std::pow(t, double(i - 2));
    }
    CHECK(eval_p(dist, t) == doctest::Approx(p).epsilon(1e-12));
    CHECK(eval_p_prime(dist, t) == doctest::Approx(pp).epsilon(1e-12));
    CHECK(eval_p_double_prime(dist, t) == doctest::Approx(ppp).epsilon(1e-11));
  }
}

TEST_CASE("p' dominates p1 and integrates to one") {
  Xoshiro256 rng(23, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t d = 2 + rng.below(40);
    const auto dist = make_distribution(random_simplex(rng, d));
    for (int j = 0; j < 20; ++j) {
      const double t = rng.uniform();
      CHECK(eval_p_prime(dist, t) >= dist.p(1) - 1e-15);
    }
    const double integral =
        integrate_smooth([&](double t) { return eval_p_prime(dist, t); }, 0.0, 1.0, 16, 24);
    CHECK(std::abs(integral - 1.0) < 1e-10);
  }
}

TEST_CASE("perturbation shifts mass to degree one") {
  const auto deg2 = make_distribution({0.0, 1.0});
  const auto same = perturb(deg2, {0.0});
  CHECK(same.p(1) == 0.0);
  CHECK(same.p(2) == 1.0);

  const auto shifted = perturb(deg2, {0.1});
  CHECK(shifted.p(1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(shifted.p(2) == doctest::Approx(0.9).epsilon(1e-15));

  const auto even = perturb(make_distribution({0.5, 0.5}), {0.2});
  CHECK(even.p(1) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(even.p(2) == doctest::Approx(0.4).epsilon(1e-15));

  CHECK_THROWS_AS(perturb(deg2, {1.0}), validation_error);
  CHECK_THROWS_AS(perturb(deg2, {-0.1}), validation_error);
}

TEST_CASE("perturbation preserves total mass to near machine precision") {
  Xoshiro256 rng(24, 0);
  for (const std::size_t d : {2u, 10u, 1000u, 10000u}) {
    const auto dist = make_distribution(random_simplex(rng, d));
    for (const double delta : {0.0, 1e-6, 0.3, 0.999}) {
      const auto q = perturb(dist, {delta});
      CHECK(std::abs(stable_sum(q.probs()) - 1.0) <= 1e-15);
    }
    const auto id = perturb(dist, {0.0});
    for (std::size_t i = 1; i <= d; ++i) CHECK(id.p(i) == dist.p(i));
  }
}

TEST_CASE("support ignores trailing zeros and tiny entries") {
  const DegreeDistribution dist({0.6, 0.0, 0.4 - 1e-12, 1e-12, 0.0});
  CHECK(dist.d() == 5);
  CHECK(dist.support() == std::vector<std::size_t>{1, 3});
  CHECK(dist.support(0.0) == std::vector<std::size_t>{1, 3, 4});
  CHECK(dist.leading_power() == 0);

  const auto embedded = dist.embedded(9);
  CHECK(embedded.d() == 9);
  CHECK(embedded.support() == dist.support());
  CHECK_THROWS_AS(dist.embedded(3), validation_error);

  CHECK(DegreeDistribution({0.0, 1.0}).leading_power() == 1);
}

TEST_CASE("json round trip is lossless in both forms") {
  Xoshiro256 rng(25, 0);
  const auto dense = make_distribution(random_simplex(rng, 12));
  const auto back = dist_from_json(dist_to_json(dense));
  REQUIRE(back.d() == dense.d());
  for (std::size_t i = 1; i <= dense.d(); ++i) CHECK(back.p(i) == dense.p(i));

  std::vector<double> sparse_w(500, 0.0);
  sparse_w[0] = 0.19363;
  sparse_w[1] = 0.75839;
  sparse_w[14] = 0.04198;
  sparse_w[499] = 1.0 - 0.19363 - 0.75839 - 0.04198;
  const auto sparse = make_distribution(sparse_w);
  const auto j = dist_to_json(sparse);
  REQUIRE(j.contains("support"));
  const auto back2 = dist_from_json(j);
  REQUIRE(back2.d() == sparse.d());
  for (std::size_t i = 1; i <= sparse.d(); ++i) CHECK(back2.p(i) == sparse.p(i));
}

TEST_CASE("malformed distribution json is rejected") {
  CHECK_THROWS_AS(dist_from_json(nlohmann::json{{"d", 3}}), validation_error);
  CHECK_THROWS_AS(dist_from_json(nlohmann::json{{"p", {0.5, 0.4}}}), validation_error);
  CHECK_THROWS_AS(
      dist_from_json(nlohmann::json{{"support", {0}}, {"values", {1.0}}}),
      validation_error);
  CHECK_THROWS_AS(
      dist_from_json(nlohmann::json{{"support", {1, 2}}, {"values", {1.0}}}),
      validation_error);
  CHECK_THROWS_AS(
      dist_from_json(nlohmann::json{{"support", {2, 2}}, {"values", {0.5, 0.5}}}),
      validation_error);
  CHECK_THROWS_AS(
      dist_from_json(nlohmann::json{{"support", {5}}, {"values", {1.0}}, {"d", 3}}),
      validation_error);
}
