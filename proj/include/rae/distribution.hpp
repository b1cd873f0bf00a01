#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rae {

// Probability vector (p_1, ..., p_d) over column weights / coded-symbol
// degrees. Immutable after construction; entries sum to 1 within 1e-12.
// Trailing zeros are allowed so a distribution can be embedded in a higher
// dimension; the support is always recomputed from the entries.
class DegreeDistribution {
 public:
  // probs[i] is the probability of degree i+1. Validates nonnegativity and
  // the sum constraint; does not renormalize.
  explicit DegreeDistribution(std::vector<double> probs);

  std::size_t d() const { return probs_.size(); }
  // 1-based degree index, degree in [1, d].
  double p(std::size_t degree) const { return probs_[degree - 1]; }
  std::span<const double> probs() const { return probs_; }

  // Indices i (1-based) with p_i > threshold.
  std::vector<std::size_t> support(double threshold = kSupportThreshold) const;

  // Smallest degree with positive mass, minus one. 0 iff p1 > 0; controls
  // which objective/gradient integrals diverge (p'(t) ~ c t^m near 0).
  std::size_t leading_power() const;

  // Copy padded with zeros up to dimension big_d >= d.
  DegreeDistribution embedded(std::size_t big_d) const;

  static constexpr double kSumTolerance = 1e-12;
  static constexpr double kSupportThreshold = 1e-9;

 private:
  std::vector<double> probs_;
};

// Mass shift toward degree 1 used to regularize distributions whose
// decoding condition fails marginally: q1 = p1 + delta(1-p1), qi = (1-delta)pi.
struct PerturbationDelta {
  double delta = 0.0;  // in [0, 1)
};

// Normalizes nonnegative weights to a distribution. Throws validation_error
// on all-zero, negative or non-finite input.
DegreeDistribution make_distribution(std::span<const double> weights);
DegreeDistribution make_distribution(std::initializer_list<double> weights);

// p(t), p'(t), p''(t) for t in [0, 1] (Horner). Throw std::domain_error
// outside [0, 1].
double eval_p(const DegreeDistribution& dist, double t);
double eval_p_prime(const DegreeDistribution& dist, double t);
double eval_p_double_prime(const DegreeDistribution& dist, double t);

// Raw-coefficient variants used by evaluators that work on unnormalized
// vectors (optimizer iterates, finite-difference probes). coeffs[i] plays
// the role of p_{i+1}; no simplex validation.
double eval_p_prime_raw(std::span<const double> coeffs, double t);

DegreeDistribution perturb(const DegreeDistribution& dist, PerturbationDelta delta);

// Compensated (Neumaier) sum; used wherever distribution mass is totalled
// so that d = 10^4 vectors still meet the 1e-12 sum tolerance.
double stable_sum(std::span<const double> values);

}  // namespace rae
