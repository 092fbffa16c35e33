#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sympconn/chart.hpp"
#include "sympconn/report.hpp"
#include "sympconn/tensor.hpp"

namespace sympconn {

/// Curvature of a chart of order K, known to order K-2.
struct CurvatureData {
    /// R^l_{ijk}, slot order (l, i, j, k).
    JetTensor up;
    /// R_{ijkl} = omega_{im} R^m_{jkl}.
    JetTensor low;
    int order = 0;
};

/// R^l_{ijk} = d_j G^l_ki - d_k G^l_ij + G^m_ki G^l_jm - G^m_ij G^l_km from the
/// raised symbols, lowered with omega. The lowered expression
///   R_ijkl = w_is d_k G^s_jl - w_is d_l G^s_jk + w^mp G_pjl G_ikm - w^mp G_pjk G_ilm
/// is evaluated as well and must agree exactly.
CurvatureData curvature(const ChartSpec& c);

/// Only the raised formula followed by lowering.
CurvatureData curvature_from_raised(const ChartSpec& c);

/// Only the lowered formula.
JetTensor curvature_lowered(const ChartSpec& c);

/// R_{ijkl} at the origin.
PointTensor curvature_at_origin(const ChartSpec& c);

/// Checks, in order: R_ijkl = -R_ijlk, R_ijkl = R_jikl, R_ijkl + R_iklj + R_iljk = 0,
/// R_ijkl + R_lijk + R_klij + R_jkli = 0, and w^kl R_lkij = 0.
ValidationReport identity_report(const JetTensor& r_low, const JetTensor& omega_inv);

/// Same checks on point values, with omega^{ij} at the origin.
ValidationReport identity_report(const PointTensor& r_low, const PointTensor& omega_inv);

struct RicciResult {
    /// K_ij = w^kl R_likj.
    JetTensor K;
    /// K symmetric; w^ji K_ij = 0; w^kl R_ijkl = 2 K_ij.
    ValidationReport checks;
};

RicciResult ricci(const CurvatureData& cd, const JetTensor& omega_inv);

/// K_ij = w^kl d_k G_lij - w^kl w^mp G_pik G_ljm. Valid only when omega is constant.
JetTensor ricci_darboux(const ChartSpec& c);

/// Covariant derivative of a tensor with the new down slot appended last:
///   (nabla T)_{..., a} = d_a T + G^i_{a s} T^{..s..} (up slots) - G^s_{a j} T_{..s..} (down slots).
JetTensor covariant_derivative(const ChartSpec& c, const JetTensor& t);

/// Iterated covariant derivative; the r-th derivative index is the last slot.
JetTensor covariant_derivative(const ChartSpec& c, const JetTensor& t, int r);

struct OperatorLResult {
    /// w^ij (nabla nabla X)^a_{j i}, where i is the outer derivative.
    JetTensor second_derivative_route;
    /// w^aq K_qp X^p.
    JetTensor ricci_route;
    /// Both routes truncated to their common order coincide.
    bool agree = false;
};

OperatorLResult operator_L(const ChartSpec& c, const JetTensor& x);

struct EinsteinResult {
    JetTensor K;
    /// K vanishes as a jet of order K-2.
    bool einstein = false;
};

EinsteinResult einstein_residual(const ChartSpec& c);

enum class SectionalKind { elliptic, hyperbolic, degenerate, flat };

std::string to_string(SectionalKind k);

struct SectionalClass {
    SectionalKind kind = SectionalKind::flat;
    /// r^2 for elliptic, -r^2 for hyperbolic, 0 otherwise.
    Rational det_invariant;
    /// Sign of r (elliptic), +1 (hyperbolic), sign of the rank-one form (degenerate), 0 (flat).
    int sign = 0;
    /// Floating approximation of r for elliptic and hyperbolic planes.
    std::optional<double> r_numeric;
    /// Matrix of Z -> R(Z, Z, X, Y) in the basis (X, Y) after scaling omega(X, Y) = 1.
    Rational e11, e12, e22;
};

/// Canonical form of Z -> R(Z, Z, X, Y) on the plane spanned by X and Y. Y is
/// rescaled so that omega(X, Y) = 1. Throws DomainError for isotropic planes.
SectionalClass sectional_classify(const PointTensor& r0, const PointTensor& omega0, const std::vector<Rational>& x,
                                  const std::vector<Rational>& y);

}  // namespace sympconn
