#include "rae/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rae/asymptotics.hpp"
#include "rae/errors.hpp"

namespace rae {

namespace {

// Power series, converges fast for |x| <= 1/2.
double dilog_series(double x) {
  double term = x, sum = x;
  for (int k = 2; k < 80; ++k) {
    term *= x;
    const double add = term / (static_cast<double>(k) * k);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double dilogarithm(double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("dilogarithm defined here on [-1, 1]");
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (x == 1.0) return pi2_6;
  if (x == -1.0) return -pi2_6 / 2.0;
  if (x > 0.5) {
    // Reflection: Li2(x) + Li2(1-x) = pi^2/6 - log(x) log(1-x).
    return pi2_6 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
  }
  if (x < -0.5) {
    // Landen: Li2(x) = -Li2(x/(x-1)) - log^2(1-x)/2, with x/(x-1) in (1/3, 1/2].
    const double l = std::log1p(-x);
    return -dilog_series(x / (x - 1.0)) - 0.5 * l * l;
  }
  return dilog_series(x);
}

D2ClosedForm d2_closed_form(double p2) {
  if (!(p2 > 0.0 && p2 < 1.0)) throw validation_error("p2 must lie in (0, 1)");
  D2ClosedForm out;
  out.p2 = p2;
  out.f_value = dilogarithm(2.0 * p2 / (1.0 + p2)) / (2.0 * p2);
  const double ratio_log = std::log1p(p2) - std::log1p(-p2);  // log((1+p2)/(1-p2))
  out.neg_df_dp1 = ratio_log / (2.0 * p2 * (1.0 + p2));
  if (!std::isfinite(out.neg_df_dp1))
    out.neg_df_dp1 = std::numeric_limits<double>::infinity();
  return out;
}

D2Solution solve_d2() {
  // f - (-df/dp1) is positive near p2 = 0 (both tend to 1, f from above)
  // and tends to -inf as p2 -> 1; bisect the sign change.
  const auto diff = [](double p2) {
    const auto cf = d2_closed_form(p2);
    return cf.f_value - cf.neg_df_dp1;
  };
  double lo = 1e-6, hi = 1.0 - 1e-6;
  if (!(diff(lo) > 0.0) || !(diff(hi) < 0.0))
    throw std::logic_error("d2 optimality equation not bracketed");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (diff(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  D2Solution sol;
  sol.p2 = 0.5 * (lo + hi);
  sol.p1 = 1.0 - sol.p2;
  sol.f = d2_closed_form(sol.p2).f_value;
  return sol;
}

LowerBoundReport check_lower_bound(const DegreeDistribution& dist, const QuadratureRule& rule) {
  LowerBoundReport rep;
  rep.objective = objective(dist, rule);
  rep.gap = rep.objective - LowerBoundReport::kBound;
  rep.holds = rep.objective >= LowerBoundReport::kBound - LowerBoundReport::kSlack;
  return rep;
}

}  // namespace rae
