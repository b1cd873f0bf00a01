#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rae/distribution.hpp"
#include "rae/linalg.hpp"
#include "rae/quadrature.hpp"

namespace rae {

// Large-blocklength analysis of the peeling decoder: the inverse decoding
// curve g(t,p) = -log(1-t)/p'(t), the objective f(p) = \int_0^1 g(t,p) dt
// (the asymptotic relative random access expectation when g is increasing),
// its derivatives, and the limiting decoded fraction s(r,p).

struct Gradient {
  std::vector<double> value;            // partial derivatives df/dp_i
  std::vector<std::uint8_t> divergent;  // component integral diverges (p1 = 0 boundary)

  bool any_divergent() const {
    for (auto f : divergent)
      if (f) return true;
    return false;
  }
};

struct MonotonicityReport {
  bool is_strictly_increasing = false;
  double min_derivative = 0.0;  // min over (0,1) of dg/dt
  double argmin_t = 0.0;

  static constexpr double kTolerance = 1e-9;
};

struct DecodingCurve {
  std::vector<double> r_grid;              // coded symbols per information symbol
  std::vector<double> undecoded_fraction;  // 1 - s(r, p), nonincreasing
  double area = 0.0;                       // asymptotic relative random access expectation
  bool monotone_g = false;
};

// g(t, p) for t in [0, 1). Returns the t -> 0 limit at t = 0. Throws
// divergence_error where p'(t) = 0 with a nonzero kernel.
double inverse_curve(const DegreeDistribution& dist, double t);

// dg/dt = [p'(t)/(1-t) + log(1-t) p''(t)] / p'(t)^2.
double inverse_curve_derivative(const DegreeDistribution& dist, double t);

// f(p). Finite iff p1 > 0 or p2 > 0; otherwise throws divergence_error.
double objective(const DegreeDistribution& dist, const QuadratureRule& rule = default_rule());

// f on a raw nonnegative coefficient vector (no simplex validation); used by
// the optimizer and by finite-difference probes off the simplex.
double objective_raw(std::span<const double> coeffs, const QuadratureRule& rule);

// All d partials. Components whose integral diverges (i <= 2m-1 where
// p'(t) ~ c t^m at 0) are flagged and set to -infinity: the pull toward
// positive mass on that degree is unbounded.
Gradient gradient(const DegreeDistribution& dist, const QuadratureRule& rule = default_rule());

// Interior fast path: fills out[i] = df/dp_i assuming coeffs[0] > 0.
void gradient_raw(std::span<const double> coeffs, const QuadratureRule& rule,
                  std::span<double> out);

// Hessian restricted to the (1-based) degree indices in `idx`. Requires
// p1 > 0 (all entries finite); symmetric positive definite.
Matrix hessian(const DegreeDistribution& dist, std::span<const std::size_t> idx,
               const QuadratureRule& rule = default_rule());
Matrix hessian_raw(std::span<const double> coeffs, std::span<const std::size_t> idx,
                   const QuadratureRule& rule);

// Full d x d Hessian.
Matrix hessian(const DegreeDistribution& dist, const QuadratureRule& rule = default_rule());

// Fixed defaults for the internal scan grids; override per call when a
// distribution needs finer bracketing.
inline constexpr std::size_t kEnvelopeGridDefault = 8192;
inline constexpr std::size_t kMonotoneGridDefault = 10000;

// s(r, p): the limiting decoded fraction after r k coded symbols,
// inf{t in [0,1): r p'(t) + log(1-t) < 0} (and 1 if the set is empty).
// Ties at a tangential touch resolve to the leftmost touching point.
double decoded_fraction(const DegreeDistribution& dist, double r,
                        std::size_t envelope_grid = kEnvelopeGridDefault);

// Scan g' on a fine grid and refine the minimum to 1e-10 (golden section).
MonotonicityReport check_monotone(const DegreeDistribution& dist,
                                  std::size_t grid = kMonotoneGridDefault);

// Smallest r with 1 - s(r, p) < 1e-8 (doubling search plus bisection).
double default_r_max(const DegreeDistribution& dist,
                     std::size_t envelope_grid = kEnvelopeGridDefault);

// Samples 1 - s(r) on n_points over [0, r_max] and computes the area
// \int_0^1 cummax_s<=t g(s, p) dt, which equals f(p) plus the flat-segment
// excess wherever g is not increasing.
DecodingCurve decoding_curve(const DegreeDistribution& dist, double r_max, int n_points,
                             const QuadratureRule& rule = default_rule(),
                             std::size_t envelope_grid = kEnvelopeGridDefault);

// Internal: shared evaluation buffers over a rule's nodes. Reused by the
// optimizer so repeated objective/gradient evaluations do not reallocate.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const QuadratureRule& rule, std::size_t d);

  double value(std::span<const double> coeffs);
  // Returns f and fills grad (size d). Assumes coeffs[0] > 0.
  double value_and_gradient(std::span<const double> coeffs, std::span<double> grad);
  Matrix hessian(std::span<const double> coeffs, std::span<const std::size_t> idx);
  // One-pass f, gradient restricted to idx, and (optionally) the idx-restricted
  // Hessian; the Newton workhorse. grad_out must have idx.size() entries.
  double restricted_system(std::span<const double> coeffs, std::span<const std::size_t> idx,
                           std::span<double> grad_out, Matrix* hess_out);

  const QuadratureRule& rule() const { return *rule_; }
  std::size_t d() const { return d_; }

 private:
  void eval_pprime(std::span<const double> coeffs);

  const QuadratureRule* rule_;
  std::size_t d_;
  std::vector<double> deriv_coeffs_, pprime_, kappa_, moments_;
};

}  // namespace rae
