#include "sympconn/normal.hpp"

#include <algorithm>
#include <functional>

#include "sympconn/curvature.hpp"
#include "sympconn/matrix.hpp"

namespace sympconn {

namespace {

template <class F>
std::optional<Witness> first_nonzero_point(int rank, int dim, F&& residual) {
    std::optional<Witness> found;
    for_each_index(rank, dim, [&](const MultiIndex& idx) {
        if (found) return;
        if (Rational r = residual(idx); r != 0) found = Witness{idx, {}};
    });
    return found;
}

Multidegree multidegree_of(int n, std::span<const int> slots) {
    Multidegree m(static_cast<std::size_t>(n), 0);
    for (int s : slots) ++m[static_cast<std::size_t>(s)];
    return m;
}

void require_rank(const PointTensor& t, int rank, const char* what) {
    if (t.rank() != rank || t.variance() != down(rank)) throw ShapeError(std::string(what) + " has the wrong rank");
}

}  // namespace

std::vector<Jet> exponential_jets(const ChartSpec& c) {
    const int n = c.dim();
    const int K = c.order();
    const JetTensor& G = c.gamma_raised();
    std::vector<Jet> phi;
    for (int i = 0; i < n; ++i) phi.push_back(Jet::variable(n, K + 1, i));
    for (int d = 2; d <= K + 1; ++d) {
        // Degree d only sees Gamma(phi) up to degree d-2 and phi up to degree d-1,
        // both already final.
        const auto g = compose_all(G.entries(), phi);
        std::vector<Jet> e;
        for (const auto& p : phi) e.push_back(p.euler());
        std::vector<Jet> ee(static_cast<std::size_t>(n * n), Jet(n, K + 1));
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) ee[j * n + k] = ee[k * n + j] = e[j] * e[k];
        const Rational scale = Rational(-1) / (d * (d - 1));
        for (int i = 0; i < n; ++i) {
            Jet s(n, K + 1);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const Jet& gi = g[static_cast<std::size_t>((i * n + j) * n + k)];
                    if (gi.is_zero()) continue;
                    s += gi.extended(K + 1) * ee[j * n + k];
                }
            phi[i] += scale * s.homogeneous_part(d);
        }
    }
    return phi;
}

JetTensor geodesic_residual(const ChartSpec& c) {
    const int n = c.dim();
    const JetTensor& g = c.gamma_lower();
    return JetTensor::generate(n, down(1), [&](const MultiIndex& I) {
        Jet sum(n, c.order() + 1);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) sum += g(I[0], j, k).times_variable(j).times_variable(k);
        return sum;
    });
}

ChartSpec to_normal_chart(const ChartSpec& c) {
    ChartSpec normal = pullback(c, exponential_jets(c));
    if (auto w = at_origin(normal.gamma_lower()).first_nonzero())
        throw ConditionError("normal_gamma_vanishes", *w, "Gamma(0) is not zero in normal coordinates");
    if (auto w = geodesic_residual(normal).first_nonzero())
        throw ConditionError("geodesic_residual", *w, "Gamma_ijk(y) y^j y^k is not zero in normal coordinates");
    return normal;
}

PointTensor derivatives_at_origin(const JetTensor& t, int r) {
    if (r < 0) throw DomainError("derivative count must be non-negative");
    if (r > order_of(t)) throw OrderError("tensor is not known to the requested derivative order");
    const int rank = t.rank();
    auto var = t.variance();
    var.insert(var.end(), static_cast<std::size_t>(r), Variance::down);
    const int n = t.dim();
    return PointTensor::generate(n, std::move(var), [&](const MultiIndex& I) -> Rational {
        const std::span<const int> head(I.data(), static_cast<std::size_t>(rank));
        const Jet& e = t.at(head);
        return e.derivative_at_origin(multidegree_of(e.n_vars(), std::span<const int>(I).subspan(rank)));
    });
}

namespace {

NormalFamily compute_family(const ChartSpec& normal, int r_max) {
    if (r_max < 0) throw DomainError("r_max must be non-negative");
    if (r_max > normal.order() - 1) throw OrderError("r_max exceeds the chart order minus one");
    NormalFamily f;
    f.dim = normal.dim();
    f.r_max = r_max;
    for (int r = 0; r <= r_max; ++r) f.A.push_back(derivatives_at_origin(normal.gamma_lower(), r));
    for (int r = 0; r <= r_max + 1; ++r) f.omega_ext.push_back(derivatives_at_origin(normal.omega(), r));
    return f;
}

std::vector<int> trailing_block(int rank, int first) {
    std::vector<int> block;
    for (int s = first; s < rank; ++s) block.push_back(s);
    return block;
}

// (i, j, k, a..) -> A_{ikj a..} - A_{jki a..}
Rational omega_relation(const PointTensor& a, const MultiIndex& I) {
    MultiIndex p = I, q = I;
    p[0] = I[0], p[1] = I[2], p[2] = I[1];
    q[0] = I[1], q[1] = I[2], q[2] = I[0];
    return a.at(p) - a.at(q);
}

std::optional<Witness> compatibility_violation(const PointTensor& a) {
    return first_nonzero_point(a.rank(), a.dim(), [&](const MultiIndex& I) -> Rational {
        MultiIndex s = I;
        std::swap(s[2], s[3]);
        return omega_relation(a, I) - omega_relation(a, s);
    });
}

std::optional<Witness> veblen_violation(const PointTensor& a) {
    PointTensor copy = a;
    try {
        declare_normal_tensor_symmetries(copy);
    } catch (const SymmetryError& e) {
        return e.witness();
    }
    return veblen_sum(copy).first_nonzero();
}

// Adds one check per property, reporting the first failing order in the detail.
void add_over_orders(ValidationReport& report, const std::string& name, int lo, int hi,
                     const std::function<std::optional<Witness>(int)>& check) {
    for (int r = lo; r <= hi; ++r) {
        if (auto w = check(r)) {
            report.add(name, w, "fails at r = " + std::to_string(r));
            return;
        }
    }
    report.add(name, std::optional<Witness>{});
}

}  // namespace

ValidationReport normal_family_report(const NormalFamily& f) {
    ValidationReport report;
    const int r_max = static_cast<int>(f.A.size()) - 1;
    if (f.A.empty() || f.omega_ext.size() != f.A.size() + 1) throw ShapeError("incomplete normal family");
    report.add("A0_vanishes", f.A[0].first_nonzero());
    add_over_orders(report, "A_symmetric_jk", 0, r_max,
                    [&](int r) { return f.A[r].symmetry_violation({{1, 2}, SymmetryKind::symmetric}); });
    add_over_orders(report, "A_symmetric_trailing", 2, r_max, [&](int r) {
        return f.A[r].symmetry_violation({trailing_block(r + 3, 3), SymmetryKind::symmetric});
    });
    add_over_orders(report, "veblen_identity", 1, r_max, [&](int r) { return veblen_violation(f.A[r]); });
    add_over_orders(report, "omega_ext_antisymmetric", 0, r_max + 1,
                    [&](int r) { return f.omega_ext[r].symmetry_violation({{0, 1}, SymmetryKind::antisymmetric}); });
    add_over_orders(report, "omega_ext_symmetric_trailing", 2, r_max + 1, [&](int r) {
        return f.omega_ext[r].symmetry_violation({trailing_block(r + 2, 2), SymmetryKind::symmetric});
    });
    add_over_orders(report, "omega_ext_from_normal_tensors", 0, r_max, [&](int r) {
        return first_nonzero_point(r + 3, f.dim, [&](const MultiIndex& I) -> Rational {
            return f.omega_ext[r + 1].at(I) - omega_relation(f.A[r], I);
        });
    });
    add_over_orders(report, "omega_compatibility", 1, r_max, [&](int r) { return compatibility_violation(f.A[r]); });
    return report;
}

NormalFamily normal_tensors_in_place(const ChartSpec& normal, int r_max) {
    NormalFamily f = compute_family(normal, r_max);
    ValidationReport report = normal_family_report(f);
    for (const auto& check : report.checks)
        if (!check.passed)
            throw ConditionError(check.name, check.witness.value_or(Witness{}), "normal family invariant fails");
    for (auto& a : f.A) declare_normal_tensor_symmetries(a);
    for (int r = 0; r < static_cast<int>(f.omega_ext.size()); ++r) {
        f.omega_ext[r].declare({{0, 1}, SymmetryKind::antisymmetric});
        if (r >= 2) f.omega_ext[r].declare({trailing_block(r + 2, 2), SymmetryKind::symmetric});
    }
    return f;
}

NormalFamily normal_tensors(const ChartSpec& c, int r_max) {
    if (r_max > c.order() - 1) throw OrderError("r_max exceeds the chart order minus one");
    return normal_tensors_in_place(to_normal_chart(c), r_max);
}

PointTensor extension(const ChartSpec& c, const JetTensor& t, int r) {
    const int n = c.dim();
    if (t.dim() != n) throw ShapeError("tensor dimension differs from the chart dimension");
    for (const auto& e : t.entries())
        if (e.n_vars() != n) throw ShapeError("tensor entries must be jets in the chart coordinates");
    const std::vector<Jet> phi = exponential_jets(c);
    JetMatrix J(n), Jinv;
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) J[i].push_back(phi[i].partial(a));
    const bool has_up = std::count(t.variance().begin(), t.variance().end(), Variance::up) > 0;
    if (has_up) Jinv = inverse(J);

    JetTensor cur(n, t.variance(), compose_all(t.entries(), phi));
    const int rank = t.rank();
    for (int slot = 0; slot < rank; ++slot) {
        const bool is_up = t.variance()[slot] == Variance::up;
        MultiIndex src;
        cur = JetTensor::generate(n, t.variance(), [&](const MultiIndex& I) {
            src = I;
            const int a = I[slot];
            Jet sum(n, 0);
            for (int m = 0; m < n; ++m) {
                src[slot] = m;
                Jet term = is_up ? Jinv[a][m] * cur.at(src) : J[m][a] * cur.at(src);
                if (m == 0)
                    sum = std::move(term);
                else
                    sum += term;
            }
            return sum;
        });
    }
    return derivatives_at_origin(cur, r);
}

ValidationReport curvature_conditions(const PointTensor& r0) {
    require_rank(r0, 4, "R_ijkl");
    const int n = r0.dim();
    ValidationReport report;
    report.add("a_antisymmetric_last_pair", first_nonzero_point(4, n, [&](const MultiIndex& I) -> Rational {
                   return r0(I[0], I[1], I[2], I[3]) + r0(I[0], I[1], I[3], I[2]);
               }));
    report.add("b_symmetric_first_pair", first_nonzero_point(4, n, [&](const MultiIndex& I) -> Rational {
                   return r0(I[0], I[1], I[2], I[3]) - r0(I[1], I[0], I[2], I[3]);
               }));
    report.add("c_first_bianchi", first_nonzero_point(4, n, [&](const MultiIndex& I) -> Rational {
                   const int i = I[0], j = I[1], k = I[2], l = I[3];
                   return r0(i, j, k, l) + r0(i, k, l, j) + r0(i, l, j, k);
               }));
    return report;
}

ValidationReport curvature_derivative_conditions(const PointTensor& r1) {
    require_rank(r1, 5, "R_ijkl,m");
    const int n = r1.dim();
    const PointTensor& R = r1;
    ValidationReport report;
    report.add("a1_antisymmetric_last_pair", first_nonzero_point(5, n, [&](const MultiIndex& I) -> Rational {
                   const int i = I[0], j = I[1], k = I[2], l = I[3], m = I[4];
                   return R(i, j, k, l, m) + R(i, j, l, k, m);
               }));
    report.add("b1_symmetric_first_pair", first_nonzero_point(5, n, [&](const MultiIndex& I) -> Rational {
                   const int i = I[0], j = I[1], k = I[2], l = I[3], m = I[4];
                   return R(i, j, k, l, m) - R(j, i, k, l, m);
               }));
    report.add("c1_first_bianchi", first_nonzero_point(5, n, [&](const MultiIndex& I) -> Rational {
                   const int i = I[0], j = I[1], k = I[2], l = I[3], m = I[4];
                   return R(i, j, k, l, m) + R(i, k, l, j, m) + R(i, l, j, k, m);
               }));
    report.add("d1_second_bianchi", first_nonzero_point(5, n, [&](const MultiIndex& I) -> Rational {
                   const int i = I[0], j = I[1], k = I[2], l = I[3], m = I[4];
                   return R(i, j, k, l, m) + R(i, j, l, m, k) + R(i, j, m, k, l);
               }));
    report.add("e1_integrability", first_nonzero_point(5, n, [&](const MultiIndex& I) -> Rational {
                   const int i = I[0], j = I[1], k = I[2], l = I[3], m = I[4];
                   return R(i, m, k, j, l) + R(i, j, m, l, k) + R(i, l, j, k, m) + R(i, k, l, m, j);
               }));
    return report;
}

PointTensor a1_cyclic(const PointTensor& r0) {
    require_rank(r0, 4, "R_ijkl");
    return PointTensor::generate(r0.dim(), down(4), [&](const MultiIndex& I) -> Rational {
        const int i = I[0], j = I[1], k = I[2], l = I[3];
        return Rational((2 * r0(i, k, l, j) + r0(i, l, j, k)) / 3);
    });
}

PointTensor a1_bianchi(const PointTensor& r0) {
    require_rank(r0, 4, "R_ijkl");
    return PointTensor::generate(r0.dim(), down(4), [&](const MultiIndex& I) -> Rational {
        const int i = I[0], j = I[1], k = I[2], l = I[3];
        return Rational((r0(i, k, l, j) + r0(i, j, l, k)) / 3);
    });
}

PointTensor a2_eliminated(const PointTensor& r1) {
    require_rank(r1, 5, "R_ijkl,m");
    const PointTensor& R = r1;
    return PointTensor::generate(r1.dim(), down(5), [&](const MultiIndex& I) -> Rational {
        const int i = I[0], j = I[1], k = I[2], l = I[3], m = I[4];
        Rational s = 2 * R(i, j, k, l, m) + R(i, j, k, m, l) + R(i, k, j, l, m) + R(i, k, j, m, l) + R(i, l, j, m, k);
        return Rational(-s / 6);
    });
}

PointTensor a2_explicit(const PointTensor& r1) {
    require_rank(r1, 5, "R_ijkl,m");
    const PointTensor& R = r1;
    return PointTensor::generate(r1.dim(), down(5), [&](const MultiIndex& I) -> Rational {
        const int i = I[0], j = I[1], k = I[2], l = I[3], m = I[4];
        Rational s = 5 * R(i, j, k, l, m) + 4 * R(i, j, l, m, k) + 3 * R(i, m, j, k, l) + 2 * R(i, k, m, l, j) +
                     R(i, l, k, m, j);
        return Rational(-s / 6);
    });
}

TriadSequence triad_sequence(const std::vector<int>& J) {
    const int m = static_cast<int>(J.size());
    if (m < 2) throw DomainError("a triad sequence needs at least two symbols");
    TriadSequence out{J, {}};
    auto& t = out.triads;
    if (m == 2) return out;
    if (m == 3) {
        t.push_back({J[0], J[1], J[2]});
        t.push_back({J[2], J[0], J[1]});
        return out;
    }
    for (int s = 1; s + 1 < m; ++s) t.push_back({J[0], J[s], J[s + 1]});
    t.push_back({J[m - 1], J[0], J[1]});
    for (int s = m - 1; s >= 3; --s) t.push_back({J[1], J[s], J[s - 1]});
    t.push_back({J[2], J[1], J[3]});
    const auto rest = triad_sequence(std::vector<int>(J.begin() + 2, J.end()));
    t.insert(t.end(), rest.triads.begin(), rest.triads.end());
    return out;
}

bool consecutive_overlap(const TriadSequence& t) {
    for (std::size_t s = 0; s + 1 < t.triads.size(); ++s) {
        const auto& a = t.triads[s];
        const auto& b = t.triads[s + 1];
        const bool same = (a[0] == b[0] && a[2] == b[1]) || (a[0] == b[1] && a[2] == b[0]);
        if (!same) return false;
    }
    return true;
}

PointTensor triad_sum(const PointTensor& r_ext) {
    const int rank = r_ext.rank();
    if (rank != 4 && rank != 5) throw DomainError("the triad formula is exact only for R and its first derivative");
    require_rank(r_ext, rank, "curvature extension");
    const int m = rank - 1;
    std::vector<int> positions(static_cast<std::size_t>(m));
    for (int s = 0; s < m; ++s) positions[s] = s;
    const TriadSequence T = triad_sequence(positions);
    const int N = static_cast<int>(T.triads.size());
    MultiIndex src(static_cast<std::size_t>(rank));
    return PointTensor::generate(r_ext.dim(), down(rank), [&](const MultiIndex& I) -> Rational {
        const std::span<const int> J(I.data() + 1, static_cast<std::size_t>(m));
        Rational sum;
        for (int s = 0; s < N; ++s) {
            const auto& u = T.triads[s];
            src[0] = I[0];
            src[1] = J[u[0]], src[2] = J[u[1]], src[3] = J[u[2]];
            int k = 4;
            for (int p = 0; p < m; ++p)
                if (p != u[0] && p != u[1] && p != u[2]) src[k++] = J[p];
            sum += (N - s) * r_ext.at(src);  // weight N - s + 1 with s counted from 1
        }
        return Rational(-sum / (N + 1));
    });
}

PointTensor a_from_curvature(const PointTensor& r_ext, int order) {
    if (order != 1 && order != 2) throw DomainError("closed forms exist for normal tensors of order 1 and 2 only");
    ValidationReport conditions = order == 1 ? curvature_conditions(r_ext) : curvature_derivative_conditions(r_ext);
    if (!conditions.passed()) {
        std::vector<std::string> failed = conditions.failures();
        throw AdmissibilityError(std::move(failed), conditions.find(failed.front())->witness.value_or(Witness{}),
                                 "curvature data is not admissible");
    }
    std::vector<PointTensor> routes;
    if (order == 1) {
        routes = {a1_cyclic(r_ext), a1_bianchi(r_ext), triad_sum(r_ext)};
    } else {
        routes = {a2_eliminated(r_ext), a2_explicit(r_ext), triad_sum(r_ext)};
    }
    for (std::size_t s = 1; s < routes.size(); ++s) {
        if (!(routes[s] == routes[0])) {
            auto w = (routes[s] - routes[0]).first_nonzero();
            throw ConditionError("closed_form_agreement", w.value_or(Witness{}), "closed forms for A disagree");
        }
    }
    PointTensor a = routes[0];
    declare_normal_tensor_symmetries(a);
    return a;
}

PointTensor curvature_from_a1(const PointTensor& a1) {
    require_rank(a1, 4, "A_ijkl");
    return PointTensor::generate(a1.dim(), down(4), [&](const MultiIndex& I) -> Rational {
        const int i = I[0], j = I[1], k = I[2], l = I[3];
        return Rational(a1(i, j, l, k) - a1(i, j, k, l));
    });
}

PointTensor curvature_derivative_from_a2(const PointTensor& a2) {
    require_rank(a2, 5, "A_ijklm");
    return PointTensor::generate(a2.dim(), down(5), [&](const MultiIndex& I) -> Rational {
        const int i = I[0], j = I[1], k = I[2], l = I[3], m = I[4];
        return Rational(a2(i, j, l, k, m) - a2(i, j, k, l, m));
    });
}

ValidationReport derivative_identity_report(const ChartSpec& c) {
    if (c.order() < 3) throw OrderError("derivative identities need a chart of order at least 3");
    const CurvatureData cd = curvature(c);
    const PointTensor r1 = at_origin(covariant_derivative(c, cd.low, 1));
    ValidationReport report = curvature_derivative_conditions(r1);
    const NormalFamily f = compute_family(to_normal_chart(c), 2);
    report.add("omega_compatibility_r1", compatibility_violation(f.A[1]));
    report.add("omega_compatibility_r2", compatibility_violation(f.A[2]));
    report.add("veblen_identity_r2", veblen_violation(f.A[2]));
    return report;
}

}  // namespace sympconn
