#include "sympconn/tensor.hpp"

#include "sympconn/matrix.hpp"

namespace sympconn {

JetTensor zero_jet_tensor(int dim, std::vector<Variance> variance, int n_vars, int order) {
    return JetTensor(dim, std::move(variance), Jet(n_vars, order));
}

PointTensor at_origin(const JetTensor& t) {
    std::vector<Rational> values;
    values.reserve(t.entries().size());
    for (const auto& e : t.entries()) values.push_back(e.constant_term());
    return PointTensor(t.dim(), t.variance(), std::move(values));
}

JetTensor to_jets(const PointTensor& t, int n_vars, int order) {
    std::vector<Jet> values;
    values.reserve(t.entries().size());
    for (const auto& e : t.entries()) values.push_back(Jet::constant(n_vars, order, e));
    return JetTensor(t.dim(), t.variance(), std::move(values));
}

JetTensor truncated(const JetTensor& t, int order) {
    std::vector<Jet> values;
    values.reserve(t.entries().size());
    for (const auto& e : t.entries()) values.push_back(e.truncated(order));
    return JetTensor(t.dim(), t.variance(), std::move(values));
}

int order_of(const JetTensor& t) {
    int order = t.entries().front().order();
    for (const auto& e : t.entries()) order = std::min(order, e.order());
    return order;
}

JetTensor matrix_inverse(const JetTensor& m) {
    if (m.rank() != 2) throw ShapeError("matrix inverse needs a rank-2 tensor");
    const int n = m.dim();
    JetMatrix a;
    for (int i = 0; i < n; ++i) {
        std::vector<Jet> row;
        for (int j = 0; j < n; ++j) row.push_back(m(i, j));
        a.push_back(std::move(row));
    }
    JetMatrix inv = inverse(std::move(a));
    std::vector<Variance> var;
    for (Variance v : m.variance()) var.push_back(v == Variance::up ? Variance::down : Variance::up);
    return JetTensor::generate(n, var, [&](const MultiIndex& idx) { return inv[idx[0]][idx[1]]; });
}

namespace {

JetTensor contract_slot_with_matrix(const JetTensor& t, int slot, const JetTensor& m, Variance from, Variance to) {
    if (slot < 0 || slot >= t.rank()) throw ShapeError("slot out of range");
    if (t.variance()[slot] != from) throw ShapeError("slot has the wrong variance for this operation");
    if (m.rank() != 2 || m.dim() != t.dim()) throw ShapeError("matrix does not match the tensor dimension");
    auto var = t.variance();
    var[slot] = to;
    MultiIndex src;
    return JetTensor::generate(t.dim(), var, [&](const MultiIndex& idx) {
        src = idx;
        src[slot] = 0;
        Jet sum = m(idx[slot], 0) * t.at(src);
        for (int k = 1; k < t.dim(); ++k) {
            src[slot] = k;
            sum += m(idx[slot], k) * t.at(src);
        }
        return sum;
    });
}

}  // namespace

JetTensor omega_lower(const JetTensor& t, int slot, const JetTensor& omega) {
    if (omega.rank() == 2) {
        RationalMatrix m0(omega.dim(), std::vector<Rational>(omega.dim()));
        for (int i = 0; i < omega.dim(); ++i)
            for (int j = 0; j < omega.dim(); ++j) m0[i][j] = omega(i, j).constant_term();
        if (determinant(m0) == 0) throw SingularityError("omega is degenerate at the origin");
    }
    return contract_slot_with_matrix(t, slot, omega, Variance::up, Variance::down);
}

JetTensor omega_raise(const JetTensor& t, int slot, const JetTensor& omega_inv) {
    return contract_slot_with_matrix(t, slot, omega_inv, Variance::down, Variance::up);
}

JetTensor partials(const JetTensor& t) {
    auto var = t.variance();
    var.push_back(Variance::down);
    const int rank = t.rank();
    MultiIndex src(static_cast<std::size_t>(rank));
    return JetTensor::generate(t.dim(), var, [&](const MultiIndex& idx) {
        std::copy_n(idx.begin(), rank, src.begin());
        return t.at(src).partial(idx[rank]);
    });
}

int veblen_term_count(int r) { return (r + 2) * (r + 1) / 2; }

void declare_normal_tensor_symmetries(PointTensor& a) {
    if (a.rank() < 3) throw ShapeError("a normal tensor has rank at least 3");
    a.declare({{1, 2}, SymmetryKind::symmetric});
    if (a.rank() >= 5) {
        std::vector<int> block;
        for (int s = 3; s < a.rank(); ++s) block.push_back(s);
        a.declare({block, SymmetryKind::symmetric});
    }
}

PointTensor veblen_sum(const PointTensor& a) {
    if (a.rank() < 4) throw ShapeError("veblen_sum needs a tensor A_{ijk a_1 .. a_r} with r >= 1");
    if (!a.has_symmetry({{1, 2}, SymmetryKind::symmetric}))
        throw PreconditionError("veblen_sum needs A declared symmetric in its second and third slots");
    if (a.rank() >= 5) {
        std::vector<int> block;
        for (int s = 3; s < a.rank(); ++s) block.push_back(s);
        if (!a.has_symmetry({block, SymmetryKind::symmetric}))
            throw PreconditionError("veblen_sum needs A declared symmetric in its trailing block");
    }
    const int rank = a.rank();
    MultiIndex src(static_cast<std::size_t>(rank));
    return PointTensor::generate(a.dim(), a.variance(), [&](const MultiIndex& idx) {
        Rational sum;
        for (int p = 1; p < rank; ++p) {
            for (int q = p + 1; q < rank; ++q) {
                src[0] = idx[0];
                src[1] = idx[p];
                src[2] = idx[q];
                int k = 3;
                for (int s = 1; s < rank; ++s)
                    if (s != p && s != q) src[k++] = idx[s];
                sum += a.at(src);
            }
        }
        return sum;
    });
}

}  // namespace sympconn
