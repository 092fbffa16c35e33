#include "sympconn/chart.hpp"

#include "sympconn/matrix.hpp"

namespace sympconn {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::explicit_gamma: return "explicit";
        case Provenance::levi_civita: return "levi_civita";
        case Provenance::flat: return "flat";
        case Provenance::reconstructed: return "reconstructed";
    }
    return "unknown";
}

ChartSpec::ChartSpec(int order, JetTensor omega, JetTensor gamma_lower, Provenance provenance)
    : order_(order), omega_(std::move(omega)), gamma_(std::move(gamma_lower)), provenance_(provenance) {
    if (order < 2) throw OrderError("chart order must be at least 2");
    const int n = omega_.dim();
    if (n % 2 != 0) throw ShapeError("a symplectic chart needs an even dimension");
    if (omega_.variance() != down(2)) throw ShapeError("omega must be a rank-2 covariant tensor");
    if (gamma_.variance() != down(3) || gamma_.dim() != n) throw ShapeError("Gamma must be a rank-3 covariant tensor");
    for (const auto& e : omega_.entries())
        if (e.n_vars() != n) throw ShapeError("omega entries must be jets in the chart coordinates");
    for (const auto& e : gamma_.entries())
        if (e.n_vars() != n) throw ShapeError("Gamma entries must be jets in the chart coordinates");
    if (order_of(omega_) < order) throw OrderError("omega is known to a lower order than the chart order");
    if (order_of(gamma_) < order - 1) throw OrderError("Gamma is known to a lower order than the chart order minus one");
    omega_ = truncated(omega_, order);
    gamma_ = truncated(gamma_, order - 1);

    RationalMatrix m0(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m0[i][j] = omega_(i, j).constant_term();
    if (determinant(m0) != 0) {
        omega_inv_ = matrix_inverse(omega_);
        gamma_up_ = omega_raise(gamma_, 0, *omega_inv_);
    }
}

const JetTensor& ChartSpec::omega_inv() const {
    if (!omega_inv_) throw SingularityError("omega is degenerate at the origin");
    return *omega_inv_;
}

const JetTensor& ChartSpec::gamma_raised() const {
    if (!gamma_up_) throw SingularityError("omega is degenerate at the origin");
    return *gamma_up_;
}

namespace {

template <class F>
std::optional<Witness> first_failure(int rank, int dim, F&& residual) {
    std::optional<Witness> found;
    for_each_index(rank, dim, [&](const MultiIndex& idx) {
        if (found) return;
        Jet r = residual(idx);
        if (auto md = r.first_nonzero()) found = Witness{idx, *md};
    });
    return found;
}

}  // namespace

ValidationReport validate(const ChartSpec& c) {
    ValidationReport report;
    const int n = c.dim();
    const JetTensor& w = c.omega();
    const JetTensor& g = c.gamma_lower();

    report.add("omega_antisymmetric",
               first_failure(2, n, [&](const MultiIndex& I) { return w(I[0], I[1]) + w(I[1], I[0]); }));

    if (c.nondegenerate())
        report.add("omega_nondegenerate", true);
    else
        report.add("omega_nondegenerate", false, "det omega(0) = 0");

    const JetTensor dw = partials(w);  // dw(i, j, k) = d_k omega_ij
    report.add("omega_closed", first_failure(3, n, [&](const MultiIndex& I) {
                   const int i = I[0], j = I[1], k = I[2];
                   return dw(i, j, k) + dw(k, i, j) + dw(j, k, i);
               }));

    report.add("connection_symmetric",
               first_failure(3, n, [&](const MultiIndex& I) { return g(I[0], I[1], I[2]) - g(I[0], I[2], I[1]); }));

    report.add("connection_preserves_omega", first_failure(3, n, [&](const MultiIndex& I) {
                   const int i = I[0], j = I[1], k = I[2];
                   return dw(i, j, k) - g(i, k, j) + g(j, k, i);
               }));
    return report;
}

void require_valid(const ChartSpec& c) {
    ValidationReport report = validate(c);
    for (const auto& check : report.checks) {
        if (check.passed) continue;
        throw ConditionError(check.name, check.witness.value_or(Witness{}), "chart is not a Fedosov chart");
    }
}

SymmetricSplit symmetric_part(const ChartSpec& c) {
    const JetTensor& g = c.gamma_lower();
    const Rational half(1, 2);
    JetTensor pi = JetTensor::generate(c.dim(), down(3), [&](const MultiIndex& I) {
        return half * (g(I[0], I[1], I[2]) + g(I[0], I[2], I[1]));
    });
    pi.declare({{1, 2}, SymmetryKind::symmetric});
    JetTensor skew = JetTensor::generate(c.dim(), down(3), [&](const MultiIndex& I) {
        return g(I[0], I[1], I[2]) - g(I[0], I[2], I[1]);
    });
    JetTensor torsion = omega_raise(skew, 0, c.omega_inv());
    torsion.declare({{1, 2}, SymmetryKind::antisymmetric});
    return {std::move(pi), std::move(torsion)};
}

namespace {

void require_symmetric_pi(const JetTensor& pi) {
    if (pi.variance() != down(3)) throw ShapeError("Pi must be a rank-3 covariant tensor");
    if (auto w = pi.symmetry_violation({{1, 2}, SymmetryKind::symmetric}))
        throw SymmetryError("pi_symmetric", *w, "Pi must be symmetric in its last two slots");
}

Jet pi_combination(const JetTensor& pi, int k, int i, int j) { return pi(k, i, j) + pi(j, i, k) - pi(i, j, k); }

}  // namespace

JetTensor preserving_from_symmetric_general(const JetTensor& pi_lower, const JetTensor& omega) {
    require_symmetric_pi(pi_lower);
    const JetTensor dw = partials(omega);
    const Rational half(1, 2);
    return JetTensor::generate(omega.dim(), down(3), [&](const MultiIndex& I) {
        const int k = I[0], i = I[1], j = I[2];
        return half * (dw(i, j, k) - dw(j, k, i) - dw(k, i, j)) + pi_combination(pi_lower, k, i, j);
    });
}

JetTensor preserving_from_symmetric_closed(const JetTensor& pi_lower, const JetTensor& omega) {
    require_symmetric_pi(pi_lower);
    const JetTensor dw = partials(omega);
    return JetTensor::generate(omega.dim(), down(3), [&](const MultiIndex& I) {
        const int k = I[0], i = I[1], j = I[2];
        return dw(i, j, k) + pi_combination(pi_lower, k, i, j);
    });
}

JetTensor preserving_from_symmetric(const JetTensor& pi_lower, const JetTensor& omega) {
    if (omega.variance() != down(2) || omega.dim() != pi_lower.dim()) throw ShapeError("omega does not match Pi");
    RationalMatrix m0(omega.dim(), std::vector<Rational>(omega.dim()));
    for (int i = 0; i < omega.dim(); ++i)
        for (int j = 0; j < omega.dim(); ++j) m0[i][j] = omega(i, j).constant_term();
    if (determinant(m0) == 0) throw SingularityError("omega is degenerate at the origin");

    JetTensor general = preserving_from_symmetric_general(pi_lower, omega);
    const JetTensor dw = partials(omega);
    bool closed = true;
    for_each_index(3, omega.dim(), [&](const MultiIndex& I) {
        if (closed && !(dw(I[0], I[1], I[2]) + dw(I[2], I[0], I[1]) + dw(I[1], I[2], I[0])).is_zero()) closed = false;
    });
    if (closed) {
        JetTensor shortcut = preserving_from_symmetric_closed(pi_lower, omega);
        if (!(shortcut == general)) {
            auto w = (shortcut - general).first_nonzero();
            throw ConditionError("closed_form_agreement", w.value_or(Witness{}),
                                 "general and closed-omega formulas disagree");
        }
    }
    return general;
}

JetTensor levi_civita(const JetTensor& g) {
    if (g.variance() != down(2)) throw ShapeError("metric must be a rank-2 covariant tensor");
    if (auto w = g.symmetry_violation({{0, 1}, SymmetryKind::symmetric}))
        throw SymmetryError("metric_symmetric", *w, "metric must be symmetric");
    RationalMatrix m0(g.dim(), std::vector<Rational>(g.dim()));
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j) m0[i][j] = g(i, j).constant_term();
    if (determinant(m0) == 0) throw SingularityError("metric is degenerate at the origin");
    const JetTensor dg = partials(g);  // dg(i, j, k) = d_k g_ij
    const Rational half(1, 2);
    JetTensor first = JetTensor::generate(g.dim(), down(3), [&](const MultiIndex& I) {
        const int k = I[0], i = I[1], j = I[2];
        return half * (dg(j, k, i) + dg(i, k, j) - dg(i, j, k));
    });
    first.declare({{1, 2}, SymmetryKind::symmetric});
    return first;
}

JetTensor levi_civita_gamma(const JetTensor& g, const JetTensor& omega) {
    JetTensor first = levi_civita(g);
    JetTensor g_inv = matrix_inverse(g);
    JetTensor raised = omega_raise(first, 0, g_inv);
    return omega_lower(raised, 0, omega);
}

JetTensor metric_compatibility_residual(const JetTensor& g, const JetTensor& first_kind) {
    const JetTensor dg = partials(g);
    return JetTensor::generate(g.dim(), down(3), [&](const MultiIndex& I) {
        const int i = I[0], j = I[1], k = I[2];
        return dg(i, j, k) - first_kind(j, k, i) - first_kind(i, k, j);
    });
}

FunctionalDims functional_dims(long long n) {
    if (n < 1) throw DomainError("dimension must be positive");
    FunctionalDims d{};
    d.n = n;
    d.C = n * n * n;
    d.S = n * n * (n + 1) / 2;
    d.C_omega = n * n * (n + 1) / 2;
    d.S_omega = (n + 2) * (n + 1) * n / 6;
    d.Lambda3 = n * (n - 1) * (n - 2) / 6;
    d.residual = d.C - d.C_omega - (d.S - d.S_omega + d.Lambda3);
    return d;
}

PointTensor canonical_omega(int n) {
    if (n < 2 || n % 2 != 0) throw ShapeError("canonical omega needs an even positive dimension");
    PointTensor w(n, down(2), Rational(0));
    for (int a = 0; a + 1 < n; a += 2) {
        w(a, a + 1) = 1;
        w(a + 1, a) = -1;
    }
    w.declare({{0, 1}, SymmetryKind::antisymmetric});
    return w;
}

ChartSpec darboux_flat(int n, int order) {
    if (n % 2 != 0) throw ShapeError("a Darboux chart needs an even dimension");
    return ChartSpec(order, to_jets(canonical_omega(n), n, order), zero_jet_tensor(n, down(3), n, order - 1),
                     Provenance::flat);
}

namespace {

// out(..., c) = sum_k t(..., k) m(k, c) over the last slot.
JetTensor contract_last(const JetTensor& t, const std::vector<std::vector<Jet>>& m) {
    const int rank = t.rank();
    MultiIndex src;
    return JetTensor::generate(t.dim(), t.variance(), [&](const MultiIndex& I) {
        src = I;
        src[rank - 1] = 0;
        Jet sum = t.at(src) * m[0][I[rank - 1]];
        for (int k = 1; k < t.dim(); ++k) {
            src[rank - 1] = k;
            sum += t.at(src) * m[k][I[rank - 1]];
        }
        return sum;
    });
}

}  // namespace

ChartSpec pullback(const ChartSpec& c, const std::vector<Jet>& phi) {
    const int n = c.dim();
    const int K = c.order();
    if (static_cast<int>(phi.size()) != n) throw ShapeError("coordinate change needs one jet per coordinate");
    for (const auto& p : phi) {
        if (p.n_vars() != n) throw ShapeError("coordinate change must be a map of the chart's dimension");
        if (p.order() < K + 1) throw OrderError("coordinate change must be known to order K+1");
        if (p.constant_term() != 0) throw PreconditionError("coordinate change must fix the origin");
    }
    std::vector<Jet> map;
    for (const auto& p : phi) map.push_back(p.truncated(K + 1));

    // J[i][a] = d_a phi^i, H[i][b][c] = d_b d_c phi^i.
    std::vector<std::vector<Jet>> J(n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) J[i].push_back(map[i].partial(a));

    const auto omega_phi = compose_all(c.omega().entries(), map);
    const auto gamma_phi = compose_all(c.gamma_lower().entries(), map);
    JetTensor w(n, down(2), omega_phi);
    JetTensor g(n, down(3), gamma_phi);

    JetTensor w1 = contract_last(w, J);  // w1(i, b) = omega_ij J^j_b
    JetTensor omega_new = JetTensor::generate(n, down(2), [&](const MultiIndex& I) {
        Jet sum = J[0][I[0]] * w1(0, I[1]);
        for (int i = 1; i < n; ++i) sum += J[i][I[0]] * w1(i, I[1]);
        return sum;
    });

    JetTensor g1 = contract_last(g, J);  // g1(m, j, c) = Gamma_mjk J^k_c
    JetTensor g2 = JetTensor::generate(n, down(3), [&](const MultiIndex& I) {
        const int m = I[0], b = I[1], cc = I[2];
        Jet sum = g1(m, 0, cc) * J[0][b];
        for (int j = 1; j < n; ++j) sum += g1(m, j, cc) * J[j][b];
        for (int i = 0; i < n; ++i) sum += w(m, i) * map[i].partial(b).partial(cc);
        return sum;
    });
    JetTensor gamma_new = JetTensor::generate(n, down(3), [&](const MultiIndex& I) {
        Jet sum = J[0][I[0]] * g2(0, I[1], I[2]);
        for (int m = 1; m < n; ++m) sum += J[m][I[0]] * g2(m, I[1], I[2]);
        return sum;
    });
    return ChartSpec(K, std::move(omega_new), std::move(gamma_new), c.provenance());
}

namespace {

Rational random_coefficient(std::mt19937_64& rng, int max_numerator) {
    std::uniform_int_distribution<int> num(-max_numerator, max_numerator);
    std::uniform_int_distribution<int> den(1, 2);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

// Random polynomial with nonzero coefficients only in degrees [lo, hi];
// about half of the coefficients are zero.
Jet random_polynomial(std::mt19937_64& rng, int n, int order, int lo, int hi, int max_numerator) {
    Jet j(n, order);
    std::bernoulli_distribution keep(0.5);
    const auto& basis = j.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const int d = basis.degree(i);
        if (d < lo || d > hi || !keep(rng)) continue;
        j[i] = random_coefficient(rng, max_numerator);
    }
    return j;
}

}  // namespace

JetTensor random_closed_omega(std::mt19937_64& rng, int dim, int order, int max_numerator) {
    std::vector<Jet> alpha;
    for (int j = 0; j < dim; ++j) alpha.push_back(random_polynomial(rng, dim, order + 1, 2, order + 1, max_numerator));
    const PointTensor w0 = canonical_omega(dim);
    JetTensor w = JetTensor::generate(dim, down(2), [&](const MultiIndex& I) {
        const int i = I[0], j = I[1];
        return Jet::constant(dim, order, w0(i, j)) + alpha[j].partial(i) - alpha[i].partial(j);
    });
    w.declare({{0, 1}, SymmetryKind::antisymmetric});
    return w;
}

ChartSpec random_chart(std::mt19937_64& rng, const RandomChartOptions& options) {
    const int n = options.dim;
    const int K = options.order;
    if (n < 2 || n % 2 != 0) throw ShapeError("random charts need an even dimension");
    JetTensor gamma = zero_jet_tensor(n, down(3), n, K - 1);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Jet value = random_polynomial(rng, n, K - 1, 0, K - 1, options.max_numerator);
                const int p[3] = {i, j, k};
                int perm[3] = {0, 1, 2};
                do {
                    gamma(p[perm[0]], p[perm[1]], p[perm[2]]) = value;
                } while (std::next_permutation(perm, perm + 3));
            }
    ChartSpec flat(K, to_jets(canonical_omega(n), n, K), std::move(gamma), Provenance::explicit_gamma);
    if (!options.coordinate_change) return flat;

    // phi = L y + quadratic terms, L unit lower triangular.
    std::uniform_int_distribution<int> shear(-1, 1);
    std::vector<Jet> phi;
    for (int i = 0; i < n; ++i) {
        Jet p = random_polynomial(rng, n, K + 1, 2, 2, 1);
        // A nonzero y_i^2 term in phi^i keeps omega from staying constant.
        Multidegree square(static_cast<std::size_t>(n), 0);
        square[i] = 2;
        p.set_coefficient(square, shear(rng) < 0 ? -1 : 1);
        p[1 + static_cast<std::size_t>(i)] = 1;
        for (int j = 0; j < i; ++j) p[1 + static_cast<std::size_t>(j)] = shear(rng);
        phi.push_back(std::move(p));
    }
    return pullback(flat, phi);
}

}  // namespace sympconn
