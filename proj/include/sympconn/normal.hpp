#pragma once

#include <array>
#include <vector>

#include "sympconn/chart.hpp"
#include "sympconn/report.hpp"
#include "sympconn/tensor.hpp"

namespace sympconn {

/// Affine normal tensors and extensions of omega at the origin of a chart.
struct NormalFamily {
    int dim = 0;
    int r_max = 0;
    /// A[r] = A_{ijk a1..ar}: r-th partial derivatives of Gamma_ijk at the
    /// origin of normal coordinates. A[0] is zero.
    std::vector<PointTensor> A;
    /// omega_ext[r] = omega_{ij, a1..ar}, r = 0..r_max+1.
    std::vector<PointTensor> omega_ext;
};

/// Exponential map v -> x(1, v) of the geodesic with x(0) = 0, x'(0) = v, as n
/// jets of order K+1. The homogeneous parts satisfy
///   d (d-1) phi_d = -[Gamma^i_jk(phi) (E phi^j) (E phi^k)]_d
/// with E the Euler operator, starting from phi_1 = v.
std::vector<Jet> exponential_jets(const ChartSpec& c);

/// Gamma_ijk(y) y^j y^k as a rank-1 jet tensor known to order K+1.
JetTensor geodesic_residual(const ChartSpec& c);

/// The chart pulled back through the exponential map. Throws ConditionError
/// "normal_gamma_vanishes" or "geodesic_residual" if the result is not in
/// normal coordinates (which would be a bug).
ChartSpec to_normal_chart(const ChartSpec& c);

/// Normal tensors for r = 0..r_max with 0 <= r_max <= K-1, and omega extensions
/// up to r_max+1. Declares the symmetries of every tensor and throws
/// ConditionError if normal_family_report fails.
NormalFamily normal_tensors(const ChartSpec& c, int r_max);

/// Same, for a chart that is already in normal coordinates.
NormalFamily normal_tensors_in_place(const ChartSpec& normal, int r_max);

/// Checks: A0 vanishes, A_r symmetric in (j,k) and in the trailing block,
/// Veblen sums vanish, omega extensions antisymmetric in (i,j) and symmetric in
/// the trailing block, omega_{ij,k a..} = A_{ikj a..} - A_{jki a..}, and
/// A_{ikj a1..} - A_{jki a1..} symmetric in (k, a1).
ValidationReport normal_family_report(const NormalFamily& f);

/// Derivatives d^r T(0) with the derivative slots appended last.
PointTensor derivatives_at_origin(const JetTensor& t, int r);

/// r-th extension of T: r-th derivatives at 0 of T's components in normal
/// coordinates. Throws OrderError when T is not known to order r there.
PointTensor extension(const ChartSpec& c, const JetTensor& t, int r);

/// Conditions on R_ijkl at a point: a_antisymmetric_last_pair,
/// b_symmetric_first_pair, c_first_bianchi.
ValidationReport curvature_conditions(const PointTensor& r0);

/// Conditions on R_ijkl,m at a point: a1_antisymmetric_last_pair,
/// b1_symmetric_first_pair, c1_first_bianchi, d1_second_bianchi,
/// e1_integrability (R_imkj,l + R_ijml,k + R_iljk,m + R_iklm,j = 0).
ValidationReport curvature_derivative_conditions(const PointTensor& r1);

/// A_ijkl = 1/3 (2 R_iklj + R_iljk).
PointTensor a1_cyclic(const PointTensor& r0);
/// A_ijkl = 1/3 (R_iklj + R_ijlk).
PointTensor a1_bianchi(const PointTensor& r0);
/// A_ijklm = -1/6 (2 R_ijkl,m + R_ijkm,l + R_ikjl,m + R_ikjm,l + R_iljm,k).
PointTensor a2_eliminated(const PointTensor& r1);
/// A_ijklm = -1/6 (5 R_ijkl,m + 4 R_ijlm,k + 3 R_imjk,l + 2 R_ikml,j + R_ilkm,j).
PointTensor a2_explicit(const PointTensor& r1);

/// A_{ijk a1..ar} = -1/(N+1) sum_s (N-s+1) R_{i u(s), J\u(s)} over the triads u(s)
/// of J = (j k l a1..ar). Exact for r <= 1, where r_ext is R (r = 0) or its first
/// covariant derivative (r = 1).
PointTensor triad_sum(const PointTensor& r_ext);

/// Normal tensor of order 1 (from R) or 2 (from its covariant derivative).
/// Checks the conditions on the input, then evaluates every closed form and
/// throws ConditionError "closed_form_agreement" if any two disagree.
PointTensor a_from_curvature(const PointTensor& r_ext, int order);

/// R_ijkl = A_ijlk - A_ijkl.
PointTensor curvature_from_a1(const PointTensor& a1);
/// R_ijkl,m = A_ijlkm - A_ijklm.
PointTensor curvature_derivative_from_a2(const PointTensor& a2);

struct TriadSequence {
    std::vector<int> J;
    std::vector<std::array<int, 3>> triads;
};

/// Ordered triads of J: empty for |J| <= 2, {(j1 j2 j3), (j3 j1 j2)} for |J| = 3,
/// otherwise (j1 j2 j3), (j1 j3 j4) .. (j1 j_{m-1} j_m), (j_m j1 j2),
/// (j2 j_m j_{m-1}) .. (j2 j4 j3), (j3 j2 j4), followed by T(J \ {j1, j2}).
/// Throws DomainError for |J| < 2.
TriadSequence triad_sequence(const std::vector<int>& J);

/// The first and third entries of every triad are the first two entries of the
/// next one, up to order.
bool consecutive_overlap(const TriadSequence& t);

/// At the origin: the conditions a1..e1 on the covariant derivative of R, the
/// compatibility symmetry of A_{ikj a..} - A_{jki a..} for r = 1, 2 and the
/// Veblen identity at r = 2. Needs K >= 3.
ValidationReport derivative_identity_report(const ChartSpec& c);

}  // namespace sympconn
