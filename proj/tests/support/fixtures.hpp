#pragma once

#include "sympconn/chart.hpp"

namespace sympconn::testing {

/// Surface chart with omega_12 = lambda and metric lambda * identity, using
/// the Levi-Civita connection. lambda must be known to order `order`.
ChartSpec conformal_chart(const Jet& lambda, int order);

/// Stereographic sphere of radius r: lambda = 4 r^4 / (r^2 + x^2 + y^2)^2,
/// recentered at (a, b).
Jet sphere_factor(const Rational& r, const Rational& a, const Rational& b, int order);

/// Upper half plane: lambda = 1 / y^2 recentered at (a, b), b > 0.
Jet hyperbolic_factor(const Rational& a, const Rational& b, int order);

}  // namespace sympconn::testing
