#include "rae/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "rae/errors.hpp"

namespace rae {

namespace {

// Panels are graded dyadically toward both endpoints: [2^-(k+1), 2^-k] on the
// left (phi may vary on the scale of p1 near t=0) and, in the coordinate
// tau = 1-t, [2^-(k+1), 2^-k] on the right, where the kernel -log(1-t) = -log(tau)
// changes by log 2 per panel. Depth 48 leaves a tail of mass
// 2^-48 (1 - log 2^-48) ~ 1.2e-13, which is assigned to a final node at
// t = 1 - 2^-48 holding the analytic tail integral.
constexpr int kPanelDepth = 48;

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(n), w(n);
  // Newton iteration on P_n with the Bonnet recurrence; roots are symmetric.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  auto [pos, inserted] = cache.emplace(n, std::make_pair(std::move(x), std::move(w)));
  (void)inserted;
  return pos->second;
}

QuadratureRule build_log_kernel_rule(int order) {
  if (order < 2) throw validation_error("quadrature order must be at least 2");
  if (order > QuadratureRule::kMaxOrder)
    throw capability_error("quadrature order exceeds supported maximum " +
                           std::to_string(QuadratureRule::kMaxOrder));

  const int ppp = std::max(2, order / 8);  // Gauss points per panel
  const auto& [gx, gw] = gauss_legendre(ppp);

  QuadratureRule rule;
  rule.order = order;
  rule.nodes.reserve(static_cast<std::size_t>(2 * kPanelDepth - 1) * ppp + 1);
  rule.weights.reserve(rule.nodes.capacity());

  // Left half: panels [lo, hi] in t up to 1/2, innermost panel [0, 2^-48].
  double hi = std::ldexp(1.0, -kPanelDepth);
  double lo = 0.0;
  while (hi <= 0.5) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int j = 0; j < ppp; ++j) {
      const double t = mid + half * gx[j];
      rule.nodes.push_back(t);
      rule.weights.push_back(gw[j] * half * -std::log1p(-t));
    }
    lo = hi;
    hi *= 2.0;
  }

  // Right half in tau = 1-t: panels [2^-(k+1), 2^-k] for k = 1..48, i.e.
  // t from 1/2 up to 1 - 2^-48. Kernel computed from tau, free of cancellation.
  for (int k = 1; k < kPanelDepth; ++k) {
    const double tau_hi = std::ldexp(1.0, -k);        // t lower edge 1 - tau_hi
    const double tau_lo = std::ldexp(1.0, -(k + 1));  // t upper edge
    const double mid = 0.5 * (tau_lo + tau_hi), half = 0.5 * (tau_hi - tau_lo);
    for (int j = 0; j < ppp; ++j) {
      const double tau = mid - half * gx[j];  // descending tau = ascending t
      rule.nodes.push_back(1.0 - tau);
      rule.weights.push_back(gw[j] * half * -std::log(tau));
    }
  }

  // Analytic tail: \int_{1-eps}^1 -log(1-t) dt = eps (1 - log eps).
  const double eps = std::ldexp(1.0, -kPanelDepth);
  rule.nodes.push_back(1.0 - eps);
  rule.weights.push_back(eps * (1.0 - std::log(eps)));

  // Nodes mapped from distinct tau values can collide after the 1-tau
  // rounding; restore strict monotonicity on the nearest distinct doubles.
  for (std::size_t j = rule.nodes.size() - 1; j-- > 0;)
    if (rule.nodes[j] >= rule.nodes[j + 1])
      rule.nodes[j] = std::nextafter(rule.nodes[j + 1], 0.0);

  // A Gauss rule w.r.t. the kernel has weight sum exactly mu_0 = 1; enforce
  // that here so the sum invariant holds even at very low orders.
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  for (double& w : rule.weights) w /= wsum;

  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = build_log_kernel_rule(96);
  return rule;
}

double integrate_log_kernel(const QuadratureRule& rule,
                            const std::function<double(double)>& phi) {
  double acc = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double v = phi(rule.nodes[j]);
    if (!std::isfinite(v)) throw evaluation_error("integrand not finite", rule.nodes[j]);
    acc += rule.weights[j] * v;
  }
  return acc;
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b, int panels,
                        int points_per_panel) {
  const auto& [x, w] = gauss_legendre(points_per_panel);
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h, half = 0.5 * h;
    double panel = 0.0;
    for (int j = 0; j < points_per_panel; ++j) panel += w[j] * f(mid + half * x[j]);
    acc += panel * half;
  }
  return acc;
}

// Tanh-sinh rule for the full integrand -log(1-t) phi(t) on (0, 1). A node
// family unrelated to the panel rule; serves as the independent cross-check.
// Level doubling until two successive levels agree.
double integrate_log_kernel_adaptive(const std::function<double(double)>& phi, double eps) {
  (void)eps;  // endpoint handling is native to the double-exponential map
  constexpr double s_max = 4.0;

  const auto sample = [&](double s) {
    const double w = 0.5 * std::numbers::pi * std::sinh(s);
    // t = (1 + tanh(w))/2 computed through e^{2w}, keeping 1-t exact near the
    // endpoints; the kernel comes from log1p(e^{2w}) = -log(1-t).
    const double e2w = std::exp(2.0 * w);
    const double t = e2w / (1.0 + e2w);
    if (t <= 0.0 || t >= 1.0) return 0.0;  // contribution below double range
    const double ch = std::cosh(w);
    const double jac = 0.25 * std::numbers::pi * std::cosh(s) / (ch * ch);
    const double v = phi(t);
    if (!std::isfinite(v)) throw evaluation_error("integrand not finite", t);
    return jac * std::log1p(e2w) * v;
  };

  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int level = 2; level <= 10; ++level) {
    const double h = s_max / std::ldexp(1.0, level);
    const int n = static_cast<int>(std::ldexp(1.0, level));
    double acc = sample(0.0);
    for (int j = 1; j <= n; ++j) acc += sample(j * h) + sample(-j * h);
    acc *= h;
    if (level >= 4 && std::abs(acc - prev) <= 1e-13 * std::max(1.0, std::abs(acc))) return acc;
    prev = acc;
  }
  return prev;
}

}  // namespace rae
