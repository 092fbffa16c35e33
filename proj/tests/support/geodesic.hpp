#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sympconn::testing {

/// Gamma^i_jk at x, written into out[(i*n + j)*n + k].
using ChristoffelField = std::function<void(std::span<const double> x, std::span<double> out)>;

/// Position at t = 1 of the geodesic x'' = -Gamma(x)(x', x') with x(0) = 0,
/// x'(0) = v, by classical Runge-Kutta with a fixed number of steps.
std::vector<double> shoot_geodesic(const ChristoffelField& gamma, std::span<const double> v, int steps = 400);

}  // namespace sympconn::testing
