#pragma once

#include <functional>
#include <vector>

namespace rae {

// Quadrature rule for integrals of the form
//     I[phi] = \int_0^1 phi(t) * (-log(1-t)) dt,
// i.e. the -log(1-t) kernel is part of the rule's weights and callers only
// supply the smooth factor phi. Composite Gauss-Legendre over panels graded
// dyadically toward both endpoints (the kernel's log singularity sits at
// t = 1; steep 1/p'(t) factors live near t = 0), with order/8 points per
// panel and an analytic tail node at 1 - 2^-48.
//
// Kernel moments \int_0^1 t^m (-log(1-t)) dt = H_{m+1}/(m+1) reproduce to
// better than 1e-13 relative through m = 2*10^4 at the default order 96
// (the documented exactness bound; see the quadrature tests).
struct QuadratureRule {
  std::vector<double> nodes;    // t_j, strictly increasing, all in [0, 1)
  std::vector<double> weights;  // positive, sum to \int_0^1 -log(1-t) dt = 1
  int order = 0;

  static constexpr int kMaxOrder = 512;
};

// Throws capability_error for order > kMaxOrder, validation_error for order < 2.
QuadratureRule build_log_kernel_rule(int order);

// Shared default rule (order 96), built once.
const QuadratureRule& default_rule();

// sum_j w_j phi(t_j). Throws evaluation_error if phi is non-finite at a node.
double integrate_log_kernel(const QuadratureRule& rule,
                            const std::function<double(double)>& phi);

// Independent evaluation path for the same integral: composite Gauss-Legendre
// over dyadic panels [1-2^-k, 1-2^-(k+1)] of the full integrand
// phi(t) * (-log(1-t)) on [0, 1-eps], plus the analytic tail
// phi(1-eps) * eps (1 - log eps). Used for cross-checks and for integrands the
// mapped rule is not designed for.
double integrate_log_kernel_adaptive(const std::function<double(double)>& phi,
                                     double eps = 1e-12);

// Composite Gauss-Legendre for a smooth integrand on [a, b].
double integrate_smooth(const std::function<double(double)>& f, double a, double b,
                        int panels = 8, int points_per_panel = 32);

// Nodes/weights of n-point Gauss-Legendre on [-1, 1] (cached).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

}  // namespace rae
