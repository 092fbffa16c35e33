#include "sympconn/curvature.hpp"

#include <cmath>

#include "sympconn/matrix.hpp"

namespace sympconn {

namespace {

// Sum over m of a(..m..) b(..m..), built from a callback that returns the
// m-th product. Starts from the first term so jet orders propagate.
template <class F>
auto sum_over(int n, F&& term) {
    auto acc = term(0);
    for (int m = 1; m < n; ++m) acc += term(m);
    return acc;
}

template <class T, class F>
std::optional<Witness> first_nonzero_of(int rank, int dim, F&& residual) {
    std::optional<Witness> found;
    for_each_index(rank, dim, [&](const MultiIndex& idx) {
        if (found) return;
        T r = residual(idx);
        if (!entry_is_zero(r)) found = Witness{idx, entry_witness(r)};
    });
    return found;
}

}  // namespace

CurvatureData curvature_from_raised(const ChartSpec& c) {
    const int n = c.dim();
    const JetTensor& G = c.gamma_raised();  // G(l, j, k) = Gamma^l_jk
    const JetTensor dG = partials(G);        // dG(l, j, k, a) = d_a Gamma^l_jk
    JetTensor up = JetTensor::generate(n, {Variance::up, Variance::down, Variance::down, Variance::down},
                                       [&](const MultiIndex& I) {
                                           const int l = I[0], i = I[1], j = I[2], k = I[3];
                                           Jet r = dG(l, k, i, j) - dG(l, i, j, k);
                                           for (int m = 0; m < n; ++m)
                                               r += G(m, k, i) * G(l, j, m) - G(m, i, j) * G(l, k, m);
                                           return r;
                                       });
    JetTensor low = omega_lower(up, 0, c.omega());
    const int order = order_of(low);
    return {std::move(up), truncated(low, order), order};
}

JetTensor curvature_lowered(const ChartSpec& c) {
    const int n = c.dim();
    const JetTensor& w = c.omega();
    const JetTensor& winv = c.omega_inv();
    const JetTensor& g = c.gamma_lower();
    // w^sp Gamma_pjl is evaluated here rather than taken from the chart cache.
    JetTensor raised = JetTensor::generate(n, {Variance::up, Variance::down, Variance::down}, [&](const MultiIndex& I) {
        return sum_over(n, [&](int p) { return winv(I[0], p) * g(p, I[1], I[2]); });
    });
    const JetTensor d_raised = partials(raised);  // (s, j, l, k) = d_k (w^sp G_pjl)
    // Q(m, j, l) = w^mp G_pjl, so the quadratic terms read Q(m,j,l) G_ikm - Q(m,j,k) G_ilm.
    const JetTensor& Q = raised;
    return JetTensor::generate(n, down(4), [&](const MultiIndex& I) {
        const int i = I[0], j = I[1], k = I[2], l = I[3];
        Jet r = sum_over(n, [&](int s) { return w(i, s) * (d_raised(s, j, l, k) - d_raised(s, j, k, l)); });
        for (int m = 0; m < n; ++m) r += Q(m, j, l) * g(i, k, m) - Q(m, j, k) * g(i, l, m);
        return r;
    });
}

CurvatureData curvature(const ChartSpec& c) {
    CurvatureData cd = curvature_from_raised(c);
    JetTensor direct = truncated(curvature_lowered(c), cd.order);
    if (!(direct == cd.low)) {
        auto w = (direct - cd.low).first_nonzero();
        throw ConditionError("lowered_route_agreement", w.value_or(Witness{}),
                             "raised and lowered curvature formulas disagree");
    }
    cd.low.declare({{2, 3}, SymmetryKind::antisymmetric});
    return cd;
}

PointTensor curvature_at_origin(const ChartSpec& c) { return at_origin(curvature(c).low); }

namespace {

template <class T>
ValidationReport identity_report_impl(const Tensor<T>& R, const Tensor<T>& winv) {
    const int n = R.dim();
    ValidationReport report;
    report.add("R_antisymmetric_last_pair", first_nonzero_of<T>(4, n, [&](const MultiIndex& I) {
                   return T(R(I[0], I[1], I[2], I[3]) + R(I[0], I[1], I[3], I[2]));
               }));
    report.add("R_symmetric_first_pair", first_nonzero_of<T>(4, n, [&](const MultiIndex& I) {
                   return T(R(I[0], I[1], I[2], I[3]) - R(I[1], I[0], I[2], I[3]));
               }));
    report.add("first_bianchi", first_nonzero_of<T>(4, n, [&](const MultiIndex& I) {
                   const int i = I[0], j = I[1], k = I[2], l = I[3];
                   return T(R(i, j, k, l) + R(i, k, l, j) + R(i, l, j, k));
               }));
    report.add("four_index_cyclic_sum", first_nonzero_of<T>(4, n, [&](const MultiIndex& I) {
                   const int i = I[0], j = I[1], k = I[2], l = I[3];
                   return T(R(i, j, k, l) + R(l, i, j, k) + R(k, l, i, j) + R(j, k, l, i));
               }));
    report.add("trace_over_first_pair", first_nonzero_of<T>(2, n, [&](const MultiIndex& I) {
                   T sum = winv(0, 0) * R(0, 0, I[0], I[1]);
                   for (int k = 0; k < n; ++k)
                       for (int l = 0; l < n; ++l) {
                           if (k == 0 && l == 0) continue;
                           sum += winv(k, l) * R(l, k, I[0], I[1]);
                       }
                   return sum;
               }));
    return report;
}

}  // namespace

ValidationReport identity_report(const JetTensor& r_low, const JetTensor& omega_inv) {
    return identity_report_impl(r_low, omega_inv);
}

ValidationReport identity_report(const PointTensor& r_low, const PointTensor& omega_inv) {
    return identity_report_impl(r_low, omega_inv);
}

RicciResult ricci(const CurvatureData& cd, const JetTensor& omega_inv) {
    const JetTensor& R = cd.low;
    const int n = R.dim();
    auto double_trace = [&](auto&& entry) {
        Jet sum = omega_inv(0, 0) * entry(0, 0);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                if (k != 0 || l != 0) sum += omega_inv(k, l) * entry(k, l);
        return sum.truncated(cd.order);
    };
    JetTensor K = JetTensor::generate(n, down(2), [&](const MultiIndex& I) {
        return double_trace([&](int k, int l) { return R(l, I[0], k, I[1]); });
    });
    ValidationReport checks;
    checks.add("ricci_symmetric",
               first_nonzero_of<Jet>(2, n, [&](const MultiIndex& I) { return K(I[0], I[1]) - K(I[1], I[0]); }));
    {
        Jet trace = double_trace([&](int j, int i) { return K(i, j); });
        std::optional<Witness> w;
        if (auto md = trace.first_nonzero()) w = Witness{{}, *md};
        checks.add("ricci_trace_vanishes", w);
    }
    checks.add("ricci_second_contraction", first_nonzero_of<Jet>(2, n, [&](const MultiIndex& I) {
                   return double_trace([&](int k, int l) { return R(I[0], I[1], k, l); }) - Rational(2) * K(I[0], I[1]);
               }));
    if (checks.find("ricci_symmetric")->passed) K.declare({{0, 1}, SymmetryKind::symmetric});
    return {std::move(K), std::move(checks)};
}

JetTensor ricci_darboux(const ChartSpec& c) {
    const int n = c.dim();
    const JetTensor& winv = c.omega_inv();
    const JetTensor& g = c.gamma_lower();
    const JetTensor dg = partials(g);  // (l, i, j, k) = d_k Gamma_lij
    const int order = c.order() - 2;
    return JetTensor::generate(n, down(2), [&](const MultiIndex& I) {
        const int i = I[0], j = I[1];
        Jet sum(n, order);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                if (winv(k, l).is_zero()) continue;
                sum += winv(k, l) * dg(l, i, j, k);
                for (int m = 0; m < n; ++m)
                    for (int p = 0; p < n; ++p) {
                        if (winv(m, p).is_zero()) continue;
                        sum -= winv(k, l) * winv(m, p) * g(p, i, k) * g(l, j, m);
                    }
            }
        return sum;
    });
}

JetTensor covariant_derivative(const ChartSpec& c, const JetTensor& t) {
    const int n = c.dim();
    if (t.dim() != n) throw ShapeError("tensor dimension differs from the chart dimension");
    const JetTensor& G = c.gamma_raised();  // G(i, a, s) = Gamma^i_as
    const int rank = t.rank();
    auto var = t.variance();
    var.push_back(Variance::down);
    MultiIndex src(static_cast<std::size_t>(rank));
    return JetTensor::generate(n, var, [&](const MultiIndex& I) {
        const int a = I[rank];
        std::copy_n(I.begin(), rank, src.begin());
        Jet r = t.at(src).partial(a);
        for (int slot = 0; slot < rank; ++slot) {
            const int fixed = I[slot];
            for (int s = 0; s < n; ++s) {
                src[slot] = s;
                if (t.variance()[slot] == Variance::up)
                    r += G(fixed, a, s) * t.at(src);
                else
                    r -= G(s, a, fixed) * t.at(src);
            }
            src[slot] = fixed;
        }
        return r;
    });
}

JetTensor covariant_derivative(const ChartSpec& c, const JetTensor& t, int r) {
    if (r < 0) throw DomainError("derivative count must be non-negative");
    if (order_of(t) < r) throw OrderError("not enough jet order for the requested covariant derivative");
    JetTensor out = t;
    for (int k = 0; k < r; ++k) out = covariant_derivative(c, out);
    return out;
}

OperatorLResult operator_L(const ChartSpec& c, const JetTensor& x) {
    const int n = c.dim();
    if (x.variance() != up(1) || x.dim() != n) throw ShapeError("operator L acts on vector fields");
    const JetTensor& winv = c.omega_inv();
    JetTensor second = covariant_derivative(c, x, 2);  // (a, j, i), i outermost
    JetTensor lhs = JetTensor::generate(n, up(1), [&](const MultiIndex& I) {
        Jet sum = winv(0, 0) * second(I[0], 0, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != 0 || j != 0) sum += winv(i, j) * second(I[0], j, i);
        return sum;
    });
    CurvatureData cd = curvature(c);
    JetTensor K = ricci(cd, winv).K;
    JetTensor rhs = JetTensor::generate(n, up(1), [&](const MultiIndex& I) {
        Jet sum = winv(I[0], 0) * K(0, 0) * x(0);
        for (int q = 0; q < n; ++q)
            for (int p = 0; p < n; ++p)
                if (q != 0 || p != 0) sum += winv(I[0], q) * K(q, p) * x(p);
        return sum;
    });
    const int common = std::min(order_of(lhs), order_of(rhs));
    const bool agree = truncated(lhs, common) == truncated(rhs, common);
    return {std::move(lhs), std::move(rhs), agree};
}

EinsteinResult einstein_residual(const ChartSpec& c) {
    CurvatureData cd = curvature(c);
    JetTensor K = ricci(cd, c.omega_inv()).K;
    const bool einstein = K.is_zero();
    return {std::move(K), einstein};
}

std::string to_string(SectionalKind k) {
    switch (k) {
        case SectionalKind::elliptic: return "elliptic";
        case SectionalKind::hyperbolic: return "hyperbolic";
        case SectionalKind::degenerate: return "degenerate";
        case SectionalKind::flat: return "flat";
    }
    return "unknown";
}

SectionalClass sectional_classify(const PointTensor& r0, const PointTensor& omega0, const std::vector<Rational>& x,
                                  const std::vector<Rational>& y) {
    const int n = r0.dim();
    if (r0.rank() != 4 || omega0.rank() != 2 || omega0.dim() != n) throw ShapeError("expected R_ijkl and omega_ij");
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw ShapeError("plane vectors must have the chart dimension");
    Rational wxy;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) wxy += omega0(i, j) * x[i] * y[j];
    if (wxy == 0) throw DomainError("isotropic plane: omega(X, Y) = 0");
    std::vector<Rational> ys(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) ys[i] = y[i] / wxy;

    auto form = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
        Rational sum;
        for_each_index(4, n, [&](const MultiIndex& I) {
            const Rational& r = r0.at(I);
            if (r == 0) return;
            sum += r * a[I[0]] * b[I[1]] * x[I[2]] * ys[I[3]];
        });
        return sum;
    };
    SectionalClass out;
    out.e11 = form(x, x);
    out.e12 = form(x, ys);
    out.e22 = form(ys, ys);
    const Rational det = out.e11 * out.e22 - out.e12 * out.e12;
    if (det > 0) {
        out.kind = SectionalKind::elliptic;
        out.det_invariant = det;
        out.sign = sign(out.e11);
        out.r_numeric = out.sign * std::sqrt(det.get_d());
    } else if (det < 0) {
        out.kind = SectionalKind::hyperbolic;
        out.det_invariant = det;
        out.sign = 1;
        out.r_numeric = std::sqrt(-det.get_d());
    } else if (out.e11 != 0 || out.e12 != 0 || out.e22 != 0) {
        out.kind = SectionalKind::degenerate;
        out.det_invariant = 0;
        out.sign = out.e11 != 0 ? sign(out.e11) : sign(out.e22);
    } else {
        out.kind = SectionalKind::flat;
        out.det_invariant = 0;
        out.sign = 0;
    }
    return out;
}

}  // namespace sympconn
