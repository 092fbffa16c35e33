#include "sympconn/reconstruct.hpp"

#include "sympconn/curvature.hpp"
#include "sympconn/matrix.hpp"
#include "sympconn/normal.hpp"

namespace sympconn {

namespace {

void require_omega0(const PointTensor& omega0) {
    if (omega0.variance() != down(2)) throw ShapeError("omega0 must be a rank-2 covariant tensor");
    if (auto w = omega0.symmetry_violation({{0, 1}, SymmetryKind::antisymmetric}))
        throw ConditionError("c_omega_antisymmetric", *w, "omega0 must be antisymmetric");
    RationalMatrix m(omega0.dim(), std::vector<Rational>(omega0.dim()));
    for (int i = 0; i < omega0.dim(); ++i)
        for (int j = 0; j < omega0.dim(); ++j) m[i][j] = omega0(i, j);
    if (determinant(m) == 0) throw ConditionError("c_omega_nondegenerate", Witness{}, "omega0 is degenerate");
}

std::vector<int> trailing(int rank, int first) {
    std::vector<int> block;
    for (int s = first; s < rank; ++s) block.push_back(s);
    return block;
}

// Slots a1 <= a2 <= .. listed by a multidegree.
std::vector<int> slots_of(const Multidegree& m) {
    std::vector<int> out;
    for (std::size_t v = 0; v < m.size(); ++v)
        for (int c = 0; c < m[v]; ++c) out.push_back(static_cast<int>(v));
    return out;
}

Rational multidegree_factorial(const Multidegree& m) {
    mpz_class f = 1;
    for (int e : m)
        for (int c = 2; c <= e; ++c) f *= c;
    return Rational(f);
}

void fail_if(const std::optional<Witness>& w, const std::string& name, const std::string& detail) {
    if (w) throw ConditionError(name, *w, detail);
}

// (i, j, k, a..) -> A_{ikj a..} - A_{jki a..}
Rational relation(const PointTensor& a, const MultiIndex& I) {
    MultiIndex p = I, q = I;
    p[1] = I[2], p[2] = I[1];
    q[0] = I[1], q[1] = I[2], q[2] = I[0];
    return a.at(p) - a.at(q);
}

template <class F>
std::optional<Witness> first_nonzero_point(int rank, int dim, F&& residual) {
    std::optional<Witness> found;
    for_each_index(rank, dim, [&](const MultiIndex& idx) {
        if (found) return;
        if (Rational r = residual(idx); r != 0) found = Witness{idx, {}};
    });
    return found;
}

// Zero normal tensors of ranks 3.. so that a chart of the given order can be built.
std::vector<PointTensor> padded(std::vector<PointTensor> A, int n, int order) {
    while (static_cast<int>(A.size()) < order - 1)
        A.emplace_back(n, down(static_cast<int>(A.size()) + 3), Rational(0));
    return A;
}

}  // namespace

JetTensor omega_from_connection(const JetTensor& gamma_lower, const PointTensor& omega0) {
    const int n = omega0.dim();
    if (gamma_lower.variance() != down(3) || gamma_lower.dim() != n)
        throw ShapeError("Gamma must be a rank-3 covariant tensor of the dimension of omega0");
    require_omega0(omega0);
    if (auto w = gamma_lower.symmetry_violation({{1, 2}, SymmetryKind::symmetric}))
        throw SymmetryError("connection_symmetric", *w, "Gamma must be symmetric in its last two slots");
    const int order = order_of(gamma_lower) + 1;
    JetTensor omega = zero_jet_tensor(n, down(2), n, order);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<Jet> f;
            for (int k = 0; k < n; ++k) f.push_back(gamma_lower(i, k, j) - gamma_lower(j, k, i));
            try {
                omega(i, j) = radial_antiderivative(f, omega0(i, j));
            } catch (const IntegrabilityError& e) {
                const auto& w = e.witness();
                throw IntegrabilityError("omega_compatibility", Witness{{w.indices[0], w.indices[1], i, j}, w.multidegree},
                                         "d_l (Gamma_ikj - Gamma_jki) is not symmetric in k, l");
            }
            omega(j, i) = -omega(i, j);
        }
    omega.declare({{0, 1}, SymmetryKind::antisymmetric});
    return omega;
}

ChartSpec chart_from_normal_tensors(const std::vector<PointTensor>& A, const PointTensor& omega0, int order,
                                    const std::optional<std::vector<PointTensor>>& omega_ext) {
    const int n = omega0.dim();
    if (A.empty()) throw ShapeError("at least A_ijk is required");
    const int r_max = static_cast<int>(A.size()) - 1;
    if (order < 2) throw OrderError("chart order must be at least 2");
    if (order > r_max + 2) throw OrderError("chart order exceeds the supplied normal tensors plus two");
    for (int r = 0; r <= r_max; ++r)
        if (A[r].dim() != n || A[r].variance() != down(r + 3))
            throw ShapeError("A[" + std::to_string(r) + "] must be a covariant tensor of rank " + std::to_string(r + 3));
    require_omega0(omega0);

    fail_if(A[0].first_nonzero(), "a_normal_tensor_symmetries", "A_ijk must vanish");
    for (int r = 1; r <= r_max; ++r) {
        fail_if(A[r].symmetry_violation({{1, 2}, SymmetryKind::symmetric}), "a_normal_tensor_symmetries",
                "A must be symmetric in j, k");
        if (r >= 2)
            fail_if(A[r].symmetry_violation({trailing(r + 3, 3), SymmetryKind::symmetric}),
                    "a_normal_tensor_symmetries", "A must be symmetric in its trailing block");
    }
    for (int r = 1; r <= r_max; ++r) {
        PointTensor a = A[r];
        declare_normal_tensor_symmetries(a);
        fail_if(veblen_sum(a).first_nonzero(), "b_veblen_identity", "Veblen sum of A does not vanish");
    }
    for (int r = 1; r <= r_max; ++r) {
        fail_if(first_nonzero_point(r + 3, n,
                                    [&](const MultiIndex& I) -> Rational {
                                        MultiIndex s = I;
                                        std::swap(s[2], s[3]);
                                        return relation(A[r], I) - relation(A[r], s);
                                    }),
                "omega_compatibility", "A_ikj.. - A_jki.. is not symmetric in k and the first trailing index");
    }
    if (omega_ext) {
        const auto& ext = *omega_ext;
        if (ext.empty() || !(ext[0] == omega0))
            throw ConditionError("e_omega_extension_relation", Witness{}, "omega extensions must start with omega0");
        for (int r = 0; r < static_cast<int>(ext.size()); ++r) {
            if (ext[r].dim() != n || ext[r].variance() != down(r + 2))
                throw ShapeError("omega extension of order " + std::to_string(r) + " has the wrong shape");
            fail_if(ext[r].symmetry_violation({{0, 1}, SymmetryKind::antisymmetric}), "d_omega_extension_symmetries",
                    "omega extensions must be antisymmetric in i, j");
            if (r >= 2)
                fail_if(ext[r].symmetry_violation({trailing(r + 2, 2), SymmetryKind::symmetric}),
                        "d_omega_extension_symmetries", "omega extensions must be symmetric in the trailing block");
            if (r >= 1) {
                const PointTensor zero(n, down(r + 2), Rational(0));
                const PointTensor& a = r - 1 <= r_max ? A[r - 1] : zero;
                fail_if(first_nonzero_point(r + 2, n,
                                            [&](const MultiIndex& I) -> Rational {
                                                return ext[r].at(I) - relation(a, I);
                                            }),
                        "e_omega_extension_relation", "omega_ij,k.. differs from A_ikj.. - A_jki..");
            }
        }
    }

    JetTensor gamma = zero_jet_tensor(n, down(3), n, order - 1);
    for (int r = 1; r <= std::min(r_max, order - 1); ++r) {
        const MonomialBasis& basis = gamma(0, 0, 0).basis();
        for (std::size_t m = basis.degree_begin(r); m < basis.size() && basis.degree(m) == r; ++m) {
            const Multidegree& md = basis.monomial(m);
            const std::vector<int> alpha = slots_of(md);
            const Rational scale = 1 / multidegree_factorial(md);
            MultiIndex idx(static_cast<std::size_t>(r + 3));
            std::copy(alpha.begin(), alpha.end(), idx.begin() + 3);
            for_each_index(3, n, [&](const MultiIndex& I) {
                std::copy(I.begin(), I.end(), idx.begin());
                const Rational& v = A[r].at(idx);
                if (v != 0) gamma.at(I)[m] = v * scale;
            });
        }
    }
    JetTensor omega = omega_from_connection(gamma, omega0);
    ChartSpec chart(order, std::move(omega), std::move(gamma), Provenance::reconstructed);
    if (omega_ext) {
        for (int r = 0; r < static_cast<int>(omega_ext->size()) && r <= order; ++r)
            if (!(derivatives_at_origin(chart.omega(), r) == (*omega_ext)[r]))
                throw ConditionError("e_omega_extension_relation", Witness{},
                                     "supplied omega extensions differ from the integrated form");
    }
    require_valid(chart);
    return chart;
}

ChartSpec realize_curvature(const PointTensor& r0, const PointTensor& omega0, int order) {
    if (order < 3) throw OrderError("realizing curvature needs order at least 3");
    if (r0.dim() != omega0.dim()) throw ShapeError("R0 and omega0 dimensions differ");
    const int n = omega0.dim();
    PointTensor a1 = a_from_curvature(r0, 1);
    ChartSpec chart = chart_from_normal_tensors(padded({PointTensor(n, down(3), Rational(0)), a1}, n, order), omega0, order);
    if (auto w = (curvature_at_origin(chart) - r0).first_nonzero())
        throw ConditionError("realized_curvature", *w, "curvature of the realized chart differs from R0");
    return chart;
}

ChartSpec realize_curvature_derivative(const std::optional<PointTensor>& r0, const PointTensor& r1,
                                       const PointTensor& omega0, int order) {
    if (order < 4) throw OrderError("realizing the curvature derivative needs order at least 4");
    const int n = omega0.dim();
    if (r1.dim() != n || (r0 && r0->dim() != n)) throw ShapeError("curvature data and omega0 dimensions differ");
    PointTensor a2 = a_from_curvature(r1, 2);
    PointTensor a1 = r0 ? a_from_curvature(*r0, 1) : PointTensor(n, down(4), Rational(0));
    ChartSpec chart = chart_from_normal_tensors(padded({PointTensor(n, down(3), Rational(0)), a1, a2}, n, order), omega0, order);
    const CurvatureData cd = curvature(chart);
    const PointTensor expected_r0 = r0 ? *r0 : PointTensor(n, down(4), Rational(0));
    if (auto w = (at_origin(cd.low) - expected_r0).first_nonzero())
        throw ConditionError("realized_curvature", *w, "curvature of the realized chart differs from R0");
    if (auto w = (at_origin(covariant_derivative(chart, cd.low, 1)) - r1).first_nonzero())
        throw ConditionError("realized_curvature_derivative", *w, "covariant derivative of R differs from R1");
    return chart;
}

}  // namespace sympconn
