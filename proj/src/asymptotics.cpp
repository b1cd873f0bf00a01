#include "rae/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rae/errors.hpp"
#include "rae/kernels.hpp"

namespace rae {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite_objective(std::span<const double> coeffs) {
  const bool p1 = !coeffs.empty() && coeffs[0] > 0.0;
  const bool p2 = coeffs.size() > 1 && coeffs[1] > 0.0;
  if (!p1 && !p2)
    throw divergence_error("objective diverges: p1 = p2 = 0 (integrand ~ c/t near 0)");
}

}  // namespace

double inverse_curve(const DegreeDistribution& dist, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw std::domain_error("t must lie in [0, 1)");
  if (t == 0.0) {
    // Limit of -log(1-t)/p'(t) ~ t / (c t^m) as t -> 0.
    const std::size_t m = dist.leading_power();
    if (m == 0) return 0.0;
    if (m == 1) return 1.0 / (2.0 * dist.p(2));
    throw divergence_error("g(t) diverges at t -> 0: p1 = p2 = 0");
  }
  const double pp = eval_p_prime(dist, t);
  if (pp <= 0.0) throw divergence_error("p'(t) = 0 in g(t)");
  return -std::log1p(-t) / pp;
}

double inverse_curve_derivative(const DegreeDistribution& dist, double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error("t must lie in (0, 1)");
  const double pp = eval_p_prime(dist, t);
  if (pp <= 0.0) throw divergence_error("p'(t) = 0 in g'(t)");
  const double ppp = eval_p_double_prime(dist, t);
  return (pp / (1.0 - t) + std::log1p(-t) * ppp) / (pp * pp);
}

// ---------------------------------------------------------------------------
// ObjectiveEvaluator

ObjectiveEvaluator::ObjectiveEvaluator(const QuadratureRule& rule, std::size_t d)
    : rule_(&rule), d_(d) {
  deriv_coeffs_.resize(d);
  pprime_.resize(rule.nodes.size());
  kappa_.resize(rule.nodes.size());
  moments_.resize(d);
}

void ObjectiveEvaluator::eval_pprime(std::span<const double> coeffs) {
  if (coeffs.size() != d_) throw validation_error("coefficient count does not match evaluator");
  for (std::size_t m = 0; m < d_; ++m)
    deriv_coeffs_[m] = static_cast<double>(m + 1) * coeffs[m];
  kernels::horner_many(deriv_coeffs_.data(), d_, rule_->nodes.data(), pprime_.data(),
                       pprime_.size());
}

double ObjectiveEvaluator::value(std::span<const double> coeffs) {
  require_finite_objective(coeffs);
  eval_pprime(coeffs);
  return kernels::weighted_inv_sum(rule_->weights.data(), pprime_.data(), pprime_.size());
}

double ObjectiveEvaluator::value_and_gradient(std::span<const double> coeffs,
                                              std::span<double> grad) {
  require_finite_objective(coeffs);
  if (grad.size() != d_) throw validation_error("gradient span size does not match evaluator");
  eval_pprime(coeffs);
  const std::size_t n = pprime_.size();
  const double f =
      kernels::weighted_inv_sum(rule_->weights.data(), pprime_.data(), n);
  kernels::scaled_inv_pow(rule_->weights.data(), pprime_.data(), kappa_.data(), n, 2);
  kernels::vandermonde_moments(rule_->nodes.data(), kappa_.data(), n, moments_.data(), d_);
  // df/dp_i = \int i t^{i-1} log(1-t) / p'(t)^2 dt = -i * moment_{i-1}.
  for (std::size_t m = 0; m < d_; ++m) grad[m] = -static_cast<double>(m + 1) * moments_[m];
  return f;
}

double ObjectiveEvaluator::restricted_system(std::span<const double> coeffs,
                                             std::span<const std::size_t> idx,
                                             std::span<double> grad_out, Matrix* hess_out) {
  if (coeffs.empty() || coeffs[0] <= 0.0)
    throw divergence_error("hessian entries with i+j <= 3 diverge when p1 = 0");
  if (grad_out.size() != idx.size())
    throw validation_error("restricted gradient span size mismatch");
  eval_pprime(coeffs);
  const std::size_t n = pprime_.size();
  const double f = kernels::weighted_inv_sum(rule_->weights.data(), pprime_.data(), n);

  const std::size_t s = idx.size();
  std::vector<double> powers(s * n);
  const double* t = rule_->nodes.data();
  for (std::size_t a = 0; a < s; ++a) {
    if (idx[a] < 1 || idx[a] > d_) throw validation_error("index out of range");
    const double e = static_cast<double>(idx[a] - 1);
    double* row = powers.data() + a * n;
    for (std::size_t j = 0; j < n; ++j) row[j] = e == 0.0 ? 1.0 : std::pow(t[j], e);
  }

  kernels::scaled_inv_pow(rule_->weights.data(), pprime_.data(), kappa_.data(), n, 2);
  for (std::size_t a = 0; a < s; ++a)
    grad_out[a] = -static_cast<double>(idx[a]) *
                  kernels::dot(kappa_.data(), powers.data() + a * n, n);

  if (hess_out != nullptr) {
    kernels::scaled_inv_pow(rule_->weights.data(), pprime_.data(), kappa_.data(), n, 3);
    std::vector<double> scaled(n);
    Matrix h(s);
    for (std::size_t a = 0; a < s; ++a) {
      const double* ra = powers.data() + a * n;
      for (std::size_t j = 0; j < n; ++j) scaled[j] = ra[j] * kappa_[j];
      for (std::size_t b = a; b < s; ++b) {
        const double v = 2.0 * static_cast<double>(idx[a]) * static_cast<double>(idx[b]) *
                         kernels::dot(scaled.data(), powers.data() + b * n, n);
        h(a, b) = v;
        h(b, a) = v;
      }
    }
    *hess_out = std::move(h);
  }
  return f;
}

Matrix ObjectiveEvaluator::hessian(std::span<const double> coeffs,
                                   std::span<const std::size_t> idx) {
  std::vector<double> grad(idx.size());
  Matrix h;
  restricted_system(coeffs, idx, grad, &h);
  return h;
}

// ---------------------------------------------------------------------------
// Public wrappers

double objective(const DegreeDistribution& dist, const QuadratureRule& rule) {
  ObjectiveEvaluator ev(rule, dist.d());
  return ev.value(dist.probs());
}

double objective_raw(std::span<const double> coeffs, const QuadratureRule& rule) {
  ObjectiveEvaluator ev(rule, coeffs.size());
  return ev.value(coeffs);
}

void gradient_raw(std::span<const double> coeffs, const QuadratureRule& rule,
                  std::span<double> out) {
  ObjectiveEvaluator ev(rule, coeffs.size());
  ev.value_and_gradient(coeffs, out);
}

Gradient gradient(const DegreeDistribution& dist, const QuadratureRule& rule) {
  require_finite_objective(dist.probs());
  const std::size_t m = dist.leading_power();  // 0 or 1 here
  Gradient g;
  g.value.resize(dist.d());
  g.divergent.assign(dist.d(), 0);
  ObjectiveEvaluator ev(rule, dist.d());
  ev.value_and_gradient(dist.probs(), g.value);
  // Component integrals diverge for i <= 2m - 1 where p'(t) ~ c t^m at 0;
  // the pull toward mass on those degrees is unbounded.
  for (std::size_t i = 1; i + 1 <= 2 * m; ++i) {
    g.value[i - 1] = -kInf;
    g.divergent[i - 1] = 1;
  }
  return g;
}

Matrix hessian(const DegreeDistribution& dist, std::span<const std::size_t> idx,
               const QuadratureRule& rule) {
  ObjectiveEvaluator ev(rule, dist.d());
  return ev.hessian(dist.probs(), idx);
}

Matrix hessian_raw(std::span<const double> coeffs, std::span<const std::size_t> idx,
                   const QuadratureRule& rule) {
  ObjectiveEvaluator ev(rule, coeffs.size());
  return ev.hessian(coeffs, idx);
}

Matrix hessian(const DegreeDistribution& dist, const QuadratureRule& rule) {
  std::vector<std::size_t> idx(dist.d());
  for (std::size_t i = 0; i < dist.d(); ++i) idx[i] = i + 1;
  return hessian(dist, idx, rule);
}

// ---------------------------------------------------------------------------
// Decoded fraction s(r, p) via the monotone envelope of g

namespace {

// g sampled on a grid uniform in v = -log(1-t), plus its running maximum.
// The grid covers t in [~1e-8, 1-1e-6]; beyond the top the envelope equals g
// itself (g is increasing near 1 because p'(t)/(1-t) dominates).
struct GEnvelope {
  std::vector<double> ts;
  std::vector<double> g;
  std::vector<double> cummax;
  double pprime_one = 0.0;
};

GEnvelope build_envelope(const DegreeDistribution& dist, std::size_t grid) {
  grid = std::max<std::size_t>(grid, 16);
  GEnvelope env;
  env.ts.resize(grid);
  env.g.resize(grid);
  env.cummax.resize(grid);

  const double v_lo = 1e-8, v_hi = -std::log(1e-6);
  for (std::size_t k = 0; k < grid; ++k) {
    const double v = v_lo + (v_hi - v_lo) * static_cast<double>(k) / (grid - 1);
    env.ts[k] = -std::expm1(-v);
  }
  std::vector<double> dc(dist.d()), pp(grid);
  for (std::size_t m = 0; m < dist.d(); ++m) dc[m] = static_cast<double>(m + 1) * dist.p(m + 1);
  kernels::horner_many(dc.data(), dc.size(), env.ts.data(), pp.data(), grid);
  double running = -kInf;
  for (std::size_t k = 0; k < grid; ++k) {
    env.g[k] = -std::log1p(-env.ts[k]) / pp[k];
    running = std::max(running, env.g[k]);
    env.cummax[k] = running;
  }
  env.pprime_one = eval_p_prime(dist, 1.0);
  return env;
}

// Leftmost t in [lo, hi] with g(t) >= r, assuming the predicate flips once.
double bisect_crossing(const DegreeDistribution& dist, double r, double lo, double hi) {
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (inverse_curve(dist, mid) >= r)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// 1 - s(r) with full relative precision in the deep tail (bisection runs in
// v = -log(1-t) when the crossing lies beyond the envelope grid).
double undecoded_at(const DegreeDistribution& dist, const GEnvelope& env, double r) {
  if (r <= 0.0) return 1.0;
  const auto it = std::lower_bound(env.cummax.begin(), env.cummax.end(), r);
  if (it == env.cummax.end()) {
    // Tail: g is increasing here. Work in v = -log(1-t), where the kernel is
    // exact and the mapped t may round to 1.0 (p' is still well defined).
    const auto g_at_v = [&](double v) {
      const double t = std::min(-std::expm1(-v), 1.0);
      return v / eval_p_prime(dist, t);
    };
    double v_lo = -std::log1p(-env.ts.back());
    double v_hi = std::max(v_lo * 2.0, r * env.pprime_one);
    while (g_at_v(v_hi) < r) v_hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double v_mid = 0.5 * (v_lo + v_hi);
      if (v_mid <= v_lo || v_mid >= v_hi) break;
      if (g_at_v(v_mid) >= r)
        v_hi = v_mid;
      else
        v_lo = v_mid;
    }
    return std::exp(-v_hi);
  }
  const std::size_t k = static_cast<std::size_t>(it - env.cummax.begin());
  const double lo = k == 0 ? 0.0 : env.ts[k - 1];
  const double t_star = bisect_crossing(dist, r, lo, env.ts[k]);
  return 1.0 - t_star;
}

}  // namespace

double decoded_fraction(const DegreeDistribution& dist, double r, std::size_t envelope_grid) {
  if (!(r >= 0.0)) throw std::domain_error("r must be nonnegative");
  const GEnvelope env = build_envelope(dist, envelope_grid);
  return 1.0 - undecoded_at(dist, env, r);
}

MonotonicityReport check_monotone(const DegreeDistribution& dist, std::size_t grid) {
  const std::size_t kGrid = std::max<std::size_t>(grid, 16);
  const double t_lo = 1e-10, t_hi = 1.0 - 1e-9;
  double best = kInf, best_t = t_lo;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < kGrid; ++k) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(k) / (kGrid - 1);
    const double d = inverse_curve_derivative(dist, t);
    if (d < best) {
      best = d;
      best_t = t;
      best_k = k;
    }
  }
  // Golden-section refinement between the grid neighbors of the minimum.
  const double step = (t_hi - t_lo) / (kGrid - 1);
  double a = best_k == 0 ? t_lo : best_t - step;
  double b = best_k == kGrid - 1 ? t_hi : best_t + step;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = inverse_curve_derivative(dist, x1), f2 = inverse_curve_derivative(dist, x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = inverse_curve_derivative(dist, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = inverse_curve_derivative(dist, x2);
    }
  }
  const double t_min = 0.5 * (a + b);
  const double d_min = std::min(best, inverse_curve_derivative(dist, t_min));

  MonotonicityReport rep;
  rep.min_derivative = d_min;
  rep.argmin_t = d_min <= best ? t_min : best_t;
  rep.is_strictly_increasing = d_min > MonotonicityReport::kTolerance;
  return rep;
}

double default_r_max(const DegreeDistribution& dist, std::size_t envelope_grid) {
  const GEnvelope env = build_envelope(dist, envelope_grid);
  double r = 1.0;
  int guard = 0;
  while (undecoded_at(dist, env, r) >= 1e-8 && guard++ < 60) r *= 2.0;
  double lo = r / 2.0, hi = r;
  for (int i = 0; i < 50; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (undecoded_at(dist, env, mid) >= 1e-8)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

DecodingCurve decoding_curve(const DegreeDistribution& dist, double r_max, int n_points,
                             const QuadratureRule& rule, std::size_t envelope_grid) {
  if (!(r_max > 0.0)) throw validation_error("r_max must be positive");
  if (n_points < 2) throw validation_error("need at least two curve points");

  const GEnvelope env = build_envelope(dist, envelope_grid);
  DecodingCurve curve;
  curve.r_grid.resize(n_points);
  curve.undecoded_fraction.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double r = r_max * static_cast<double>(i) / (n_points - 1);
    curve.r_grid[i] = r;
    curve.undecoded_fraction[i] = undecoded_at(dist, env, r);
  }
  // Guard the nonincreasing invariant against refinement noise at the tail.
  for (int i = 1; i < n_points; ++i)
    curve.undecoded_fraction[i] =
        std::min(curve.undecoded_fraction[i], curve.undecoded_fraction[i - 1]);

  curve.monotone_g = check_monotone(dist).is_strictly_increasing;

  // Area under the envelope: f(p) plus the excess over flat stretches where
  // the running maximum exceeds g (layer-cake form of the tail-sum identity).
  double area = objective(dist, rule);
  std::size_t k = 0;
  while (k < env.ts.size()) {
    if (env.cummax[k] > env.g[k] * (1.0 + 1e-12) + 1e-300) {
      const std::size_t start = k;
      while (k < env.ts.size() && env.cummax[k] > env.g[k] * (1.0 + 1e-12) + 1e-300) ++k;
      const double level = env.cummax[start];
      const double t_left = env.ts[start == 0 ? 0 : start - 1];
      double t_right = k < env.ts.size() ? env.ts[k] : 1.0 - 1e-9;
      // Refine the right edge: first t with g back at the flat level.
      t_right = bisect_crossing(dist, level, env.ts[k - 1], t_right);
      area += integrate_smooth(
          [&](double t) { return std::max(0.0, level - inverse_curve(dist, t)); }, t_left,
          t_right, 16, 16);
    } else {
      ++k;
    }
  }
  curve.area = area;
  return curve;
}

}  // namespace rae
