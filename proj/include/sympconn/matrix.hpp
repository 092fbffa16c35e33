#pragma once

#include <vector>

#include "sympconn/jet.hpp"
#include "sympconn/rational.hpp"

namespace sympconn {

using RationalMatrix = std::vector<std::vector<Rational>>;
using JetMatrix = std::vector<std::vector<Jet>>;

Rational determinant(RationalMatrix m);

/// Throws SingularityError when the matrix is singular.
RationalMatrix inverse(RationalMatrix m);

/// Inverse of a matrix of jets whose value at the origin is invertible.
/// Gauss-Jordan elimination with pivots that are units of the jet ring
/// (nonzero constant term), divided through by reciprocal().
JetMatrix inverse(JetMatrix m);

JetMatrix constant_part(const JetMatrix& m);

}  // namespace sympconn
