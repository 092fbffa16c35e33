#pragma once

#include <optional>
#include <vector>

#include "sympconn/chart.hpp"
#include "sympconn/tensor.hpp"

namespace sympconn {

/// omega with omega(0) = omega0 and d_k omega_ij = Gamma_ikj - Gamma_jki, found by
/// radial integration. Gamma must be symmetric in its last two slots. Throws
/// IntegrabilityError "omega_compatibility" with witness (k, l, i, j) and a
/// multidegree when d_l(Gamma_ikj - Gamma_jki) is not symmetric in k, l.
JetTensor omega_from_connection(const JetTensor& gamma_lower, const PointTensor& omega0);

/// Chart in normal coordinates with Gamma_ijk(y) = sum_r A_{ijk a1..ar} y^a1..y^ar / r!
/// and omega integrated from the connection. A[r] for r = 0..r_max with
/// K <= r_max + 2; normal tensors beyond r_max are taken to be zero. If omega
/// extensions are supplied they must agree with the integrated omega.
///
/// Conditions, each raised as ConditionError under its name:
/// a_normal_tensor_symmetries, b_veblen_identity, c_omega_antisymmetric,
/// c_omega_nondegenerate, d_omega_extension_symmetries,
/// e_omega_extension_relation, omega_compatibility.
ChartSpec chart_from_normal_tensors(const std::vector<PointTensor>& A, const PointTensor& omega0, int order,
                                    const std::optional<std::vector<PointTensor>>& omega_ext = std::nullopt);

/// A chart of order K >= 3 whose curvature at the origin is R0. R0 must satisfy
/// a_antisymmetric_last_pair, b_symmetric_first_pair and c_first_bianchi.
/// Normal tensors of rank 5 and above are zero.
ChartSpec realize_curvature(const PointTensor& r0, const PointTensor& omega0, int order = 3);

/// A chart of order K >= 4 whose curvature and its first covariant derivative at
/// the origin are R0 (zero when absent) and R1. R1 must satisfy a1..e1. Input
/// failing any condition raises AdmissibilityError listing every failed one.
ChartSpec realize_curvature_derivative(const std::optional<PointTensor>& r0, const PointTensor& r1,
                                       const PointTensor& omega0, int order = 4);

}  // namespace sympconn
