#include "rae/distribution.hpp"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "rae/errors.hpp"
#include "rae/kernels.hpp"

namespace rae {

double stable_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

DegreeDistribution::DegreeDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw validation_error("distribution needs at least one entry");
  for (double p : probs_) {
    if (!std::isfinite(p)) throw validation_error("distribution entry is not finite");
    if (p < 0.0) throw validation_error("distribution entry is negative");
  }
  const double sum = stable_sum(probs_);
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw validation_error("distribution entries sum to " + std::to_string(sum) +
                           ", expected 1 within 1e-12");
}

std::vector<std::size_t> DegreeDistribution::support(double threshold) const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < probs_.size(); ++i)
    if (probs_[i] > threshold) s.push_back(i + 1);
  return s;
}

std::size_t DegreeDistribution::leading_power() const {
  for (std::size_t i = 0; i < probs_.size(); ++i)
    if (probs_[i] > 0.0) return i;
  return probs_.size();  // unreachable for a valid distribution
}

DegreeDistribution DegreeDistribution::embedded(std::size_t big_d) const {
  if (big_d < d()) throw validation_error("embedding dimension smaller than d");
  std::vector<double> padded(probs_.begin(), probs_.end());
  padded.resize(big_d, 0.0);
  return DegreeDistribution(std::move(padded));
}

DegreeDistribution make_distribution(std::span<const double> weights) {
  if (weights.empty()) throw validation_error("need at least one weight");
  for (double w : weights) {
    if (!std::isfinite(w)) throw validation_error("weight is not finite");
    if (w < 0.0) throw validation_error("weight is negative");
  }
  const double sum = stable_sum(weights);
  if (sum <= 0.0) throw validation_error("weights are all zero");
  std::vector<double> probs(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) probs[i] = weights[i] / sum;
  return DegreeDistribution(std::move(probs));
}

DegreeDistribution make_distribution(std::initializer_list<double> weights) {
  return make_distribution(std::span<const double>(weights.begin(), weights.size()));
}

namespace {

void check_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("t must lie in [0, 1]");
}

}  // namespace

double eval_p(const DegreeDistribution& dist, double t) {
  check_unit_interval(t);
  // p(t) = t * (p1 + p2 t + ... ), Horner on the shifted coefficients.
  const auto c = dist.probs();
  double acc = 0.0;
  for (std::size_t m = c.size(); m-- > 0;) acc = acc * t + c[m];
  return acc * t;
}

double eval_p_prime_raw(std::span<const double> coeffs, double t) {
  double acc = 0.0;
  for (std::size_t m = coeffs.size(); m-- > 0;)
    acc = acc * t + static_cast<double>(m + 1) * coeffs[m];
  return acc;
}

double eval_p_prime(const DegreeDistribution& dist, double t) {
  check_unit_interval(t);
  return eval_p_prime_raw(dist.probs(), t);
}

double eval_p_double_prime(const DegreeDistribution& dist, double t) {
  check_unit_interval(t);
  const auto c = dist.probs();
  double acc = 0.0;
  for (std::size_t m = c.size(); m-- > 1;)
    acc = acc * t + static_cast<double>((m + 1) * m) * c[m];
  return acc;
}

DegreeDistribution perturb(const DegreeDistribution& dist, PerturbationDelta delta) {
  const double del = delta.delta;
  if (!(del >= 0.0 && del < 1.0)) throw validation_error("delta must lie in [0, 1)");
  std::vector<double> q(dist.probs().begin(), dist.probs().end());
  for (double& qi : q) qi *= (1.0 - del);
  q[0] = dist.p(1) + del * (1.0 - dist.p(1));
  return DegreeDistribution(std::move(q));
}

}  // namespace rae
