#pragma once

#include "rae/distribution.hpp"
#include "rae/quadrature.hpp"

namespace rae {

// Closed-form analysis available at d = 2, and the universal pi/4 lower
// bound on the asymptotic relative random access expectation.

// Li2(x) = \int_0^x -log(1-t)/t dt for x in [-1, 1], to ~1e-14 relative.
double dilogarithm(double x);

struct D2ClosedForm {
  double p2 = 0.0;
  double f_value = 0.0;     // objective at (1-p2, p2)
  double neg_df_dp1 = 0.0;  // -df/dp1 at (1-p2, p2); +inf as p2 -> 1
};

// f(p) = Li2(2 p2/(1+p2)) / (2 p2) and
// -df/dp1 = log((1+p2)/(1-p2)) / (2 p2 (1+p2)), both for p = (1-p2, p2).
D2ClosedForm d2_closed_form(double p2);

struct D2Solution {
  double p1 = 0.0;
  double p2 = 0.0;
  double f = 0.0;
};

// Optimal weight-1/weight-2 mix: the root of f(p2) = -df/dp1(p2) on (0, 1),
// bisected to 1e-12. Independent of the quadrature/optimizer path.
D2Solution solve_d2();

struct LowerBoundReport {
  bool holds = false;
  double objective = 0.0;
  double gap = 0.0;  // objective - pi/4

  static constexpr double kBound = 0.785398163397448279;  // pi/4
  static constexpr double kSlack = 1e-9;
};

// Checks f(dist) >= pi/4 - 1e-9 and reports the Cauchy-Schwarz equality gap.
LowerBoundReport check_lower_bound(const DegreeDistribution& dist,
                                   const QuadratureRule& rule = default_rule());

}  // namespace rae
