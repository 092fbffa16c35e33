#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sympconn/report.hpp"
#include "sympconn/tensor.hpp"

namespace sympconn {

enum class Provenance { explicit_gamma, levi_civita, flat, reconstructed };

std::string to_string(Provenance p);

/// A (pre-)Fedosov structure on one chart centered at the origin, in jets.
///
/// With truncation order K the symplectic form omega_{ij} is kept to order K
/// and the lowered connection symbols Gamma_{ijk} = omega_{il} Gamma^l_{jk} to
/// order K-1, so curvature is known to order K-2.
class ChartSpec {
public:
    /// Truncates omega to order K and gamma to order K-1. Throws ShapeError for
    /// odd or mismatched dimensions, OrderError when K < 2 or an input is too short.
    ChartSpec(int order, JetTensor omega, JetTensor gamma_lower, Provenance provenance = Provenance::explicit_gamma);

    int dim() const noexcept { return omega_.dim(); }
    int order() const noexcept { return order_; }
    Provenance provenance() const noexcept { return provenance_; }

    const JetTensor& omega() const noexcept { return omega_; }
    const JetTensor& gamma_lower() const noexcept { return gamma_; }

    bool nondegenerate() const noexcept { return omega_inv_.has_value(); }
    /// omega^{ij} with omega^{ij} omega_{jk} = delta^i_k. Throws SingularityError
    /// when omega(0) is degenerate.
    const JetTensor& omega_inv() const;
    /// Gamma^l_{jk} = omega^{li} Gamma_{ijk}, slot order (l, j, k).
    const JetTensor& gamma_raised() const;

private:
    int order_;
    JetTensor omega_;
    JetTensor gamma_;
    Provenance provenance_;
    std::optional<JetTensor> omega_inv_;
    std::optional<JetTensor> gamma_up_;
};

/// Checks, in this order: omega antisymmetric, omega(0) nondegenerate, d omega = 0,
/// Gamma_{ijk} = Gamma_{ikj}, and d_k omega_{ij} = Gamma_{ikj} - Gamma_{jki}.
ValidationReport validate(const ChartSpec& c);

/// Throws ConditionError naming the first failed check of validate().
void require_valid(const ChartSpec& c);

struct SymmetricSplit {
    /// Pi_{kij} = (Gamma_{kij} + Gamma_{kji}) / 2, lowered like the chart storage.
    JetTensor pi_lower;
    /// T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji}.
    JetTensor torsion;
};

SymmetricSplit symmetric_part(const ChartSpec& c);

/// Lowered symbols of the unique omega-preserving connection whose symmetric
/// part is Pi:
///   Gamma_{kij} = (d_k w_ij - d_i w_jk - d_j w_ki)/2 + Pi_{kij} + Pi_{jik} - Pi_{ijk}.
/// When omega is closed the shorter form with d_k w_ij is evaluated as well and
/// the two must coincide. Pi must be symmetric in its last two slots.
JetTensor preserving_from_symmetric(const JetTensor& pi_lower, const JetTensor& omega);

/// The general formula only (no closedness shortcut).
JetTensor preserving_from_symmetric_general(const JetTensor& pi_lower, const JetTensor& omega);
/// d_k w_ij + Pi_{kij} + Pi_{jik} - Pi_{ijk}; valid only for closed omega.
JetTensor preserving_from_symmetric_closed(const JetTensor& pi_lower, const JetTensor& omega);

/// Christoffel symbols of the first kind of the Levi-Civita connection of g:
/// [ij,k] = (d_i g_jk + d_j g_ik - d_k g_ij)/2, stored with slot order (k, i, j).
JetTensor levi_civita(const JetTensor& g);

/// Levi-Civita connection of g converted to the chart storage convention
/// Gamma_{kij} = omega_{kl} g^{lm} [ij,m].
JetTensor levi_civita_gamma(const JetTensor& g, const JetTensor& omega);

/// d_k g_ij - [ki,j] - [kj,i] for the first-kind symbols above; zero iff the
/// connection preserves g.
JetTensor metric_compatibility_residual(const JetTensor& g, const JetTensor& first_kind);

struct FunctionalDims {
    long long n;
    long long C, S, C_omega, S_omega, Lambda3;
    long long residual;
};

/// Counts of connection symbols per point: all connections, symmetric ones,
/// omega-preserving ones, symplectic ones, and 3-forms; residual is
/// C - C_omega - (S - S_omega + Lambda3).
FunctionalDims functional_dims(long long n);

/// Block canonical form: omega(2a, 2a+1) = 1, omega(2a+1, 2a) = -1.
PointTensor canonical_omega(int n);

/// Canonical constant omega and Gamma = 0. Throws ShapeError for odd n.
ChartSpec darboux_flat(int n, int order);

/// Pulls a chart back along x = phi(y). phi needs zero constant term, an
/// invertible linear part and order at least K+1. Uses
///   omega'_{ab} = J^i_a J^j_b omega_ij(phi),
///   Gamma'_{abc} = J^m_a [Gamma_mjk(phi) J^j_b J^k_c + omega_mi(phi) d_b d_c phi^i].
ChartSpec pullback(const ChartSpec& c, const std::vector<Jet>& phi);

struct RandomChartOptions {
    int dim = 2;
    int order = 3;
    /// Apply a random polynomial change of coordinates after building the
    /// Darboux chart, so omega is no longer constant.
    bool coordinate_change = true;
    /// Numerators of random coefficients are drawn from [-max_numerator, max_numerator].
    int max_numerator = 2;
};

/// Random Fedosov chart: canonical omega with random totally symmetric
/// polynomial Gamma_{ijk}, optionally pulled back along a random map.
ChartSpec random_chart(std::mt19937_64& rng, const RandomChartOptions& options);

/// Random closed omega = canonical + d(alpha) with alpha of degree >= 2, so
/// omega(0) stays canonical.
JetTensor random_closed_omega(std::mt19937_64& rng, int dim, int order, int max_numerator = 2);

}  // namespace sympconn
