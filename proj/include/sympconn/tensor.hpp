#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sympconn/errors.hpp"
#include "sympconn/jet.hpp"
#include "sympconn/rational.hpp"

namespace sympconn {

enum class Variance { up, down };

enum class SymmetryKind { symmetric, antisymmetric };

/// Declared (anti)symmetry of a tensor under every permutation of `slots`.
struct Symmetry {
    std::vector<int> slots;
    SymmetryKind kind;

    friend bool operator==(const Symmetry&, const Symmetry&) = default;
};

using MultiIndex = std::vector<int>;

inline bool entry_is_zero(const Rational& q) { return q == 0; }
inline bool entry_is_zero(const Jet& j) { return j.is_zero(); }
inline std::vector<int> entry_witness(const Rational&) { return {}; }
inline std::vector<int> entry_witness(const Jet& j) { return j.first_nonzero().value_or(Multidegree{}); }

/// Calls f(index) for every multi-index of the given rank over {0..dim-1},
/// last slot varying fastest.
template <class F>
void for_each_index(int rank, int dim, F&& f) {
    MultiIndex idx(static_cast<std::size_t>(rank), 0);
    if (dim <= 0) return;
    while (true) {
        f(static_cast<const MultiIndex&>(idx));
        int s = rank - 1;
        while (s >= 0 && ++idx[s] == dim) idx[s--] = 0;
        if (s < 0) return;
    }
}

/// Dense multi-index array with per-slot variance and checked symmetry declarations.
/// Every slot has the same dimension. Entries are stored row-major.
template <class T>
class Tensor {
public:
    Tensor(int dim, std::vector<Variance> variance, const T& fill)
        : dim_(dim), variance_(std::move(variance)), entries_(count(dim, variance_.size()), fill) {
        if (dim < 1) throw ShapeError("tensor dimension must be positive");
    }

    /// Tensor whose entries are gen(index).
    template <class F>
    static Tensor generate(int dim, std::vector<Variance> variance, F&& gen) {
        const int rank = static_cast<int>(variance.size());
        std::vector<T> entries;
        entries.reserve(count(dim, variance.size()));
        for_each_index(rank, dim, [&](const MultiIndex& idx) { entries.push_back(gen(idx)); });
        Tensor t(dim, std::move(variance), std::move(entries));
        return t;
    }

    Tensor(int dim, std::vector<Variance> variance, std::vector<T> entries)
        : dim_(dim), variance_(std::move(variance)), entries_(std::move(entries)) {
        if (entries_.size() != count(dim, variance_.size())) throw ShapeError("entry count does not match the shape");
    }

    int dim() const noexcept { return dim_; }
    int rank() const noexcept { return static_cast<int>(variance_.size()); }
    const std::vector<Variance>& variance() const noexcept { return variance_; }
    const std::vector<T>& entries() const noexcept { return entries_; }
    std::vector<T>& entries() noexcept { return entries_; }
    const std::vector<Symmetry>& symmetries() const noexcept { return symmetries_; }

    std::size_t offset(std::span<const int> idx) const {
        std::size_t off = 0;
        for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
        return off;
    }

    const T& at(std::span<const int> idx) const { return entries_[offset(idx)]; }
    T& at(std::span<const int> idx) { return entries_[offset(idx)]; }

    template <class... I>
    const T& operator()(I... i) const {
        const int idx[] = {static_cast<int>(i)...};
        return entries_[offset(idx)];
    }
    template <class... I>
    T& operator()(I... i) {
        const int idx[] = {static_cast<int>(i)...};
        return entries_[offset(idx)];
    }

    /// First place where the declared symmetry fails, if any.
    std::optional<Witness> symmetry_violation(const Symmetry& s) const {
        for (int slot : s.slots)
            if (slot < 0 || slot >= rank()) throw ShapeError("symmetry refers to a missing slot");
        std::optional<Witness> found;
        // Adjacent transpositions of the listed slots generate the whole permutation group.
        for_each_index(rank(), dim_, [&](const MultiIndex& idx) {
            if (found) return;
            for (std::size_t p = 0; p + 1 < s.slots.size(); ++p) {
                MultiIndex swapped = idx;
                std::swap(swapped[s.slots[p]], swapped[s.slots[p + 1]]);
                const T& a = at(idx);
                const T& b = at(swapped);
                const T diff = s.kind == SymmetryKind::symmetric ? T(a - b) : T(a + b);
                if (!entry_is_zero(diff)) {
                    found = Witness{idx, entry_witness(diff)};
                    return;
                }
            }
        });
        return found;
    }

    /// Records a symmetry after checking it holds entrywise; throws SymmetryError otherwise.
    Tensor& declare(Symmetry s) {
        if (auto w = symmetry_violation(s))
            throw SymmetryError(s.kind == SymmetryKind::symmetric ? "declared_symmetry" : "declared_antisymmetry", *w);
        if (std::find(symmetries_.begin(), symmetries_.end(), s) == symmetries_.end())
            symmetries_.push_back(std::move(s));
        return *this;
    }

    bool has_symmetry(const Symmetry& s) const {
        return std::find(symmetries_.begin(), symmetries_.end(), s) != symmetries_.end();
    }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const T& e) { return entry_is_zero(e); });
    }

    /// First nonzero entry as a witness (indices plus multidegree for jets).
    std::optional<Witness> first_nonzero() const {
        std::optional<Witness> found;
        for_each_index(rank(), dim_, [&](const MultiIndex& idx) {
            if (!found && !entry_is_zero(at(idx))) found = Witness{idx, entry_witness(at(idx))};
        });
        return found;
    }

    Tensor& operator+=(const Tensor& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
        symmetries_.clear();
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
        symmetries_.clear();
        return *this;
    }
    Tensor& operator*=(const Rational& s) {
        for (auto& e : entries_) e *= s;
        return *this;
    }
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(const Rational& s, Tensor a) { return a *= s; }

    /// Entry equality and equal shapes; declared symmetries are not compared.
    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.dim_ == b.dim_ && a.variance_ == b.variance_ && a.entries_ == b.entries_;
    }

    void require_same_shape(const Tensor& o) const {
        if (dim_ != o.dim_ || variance_ != o.variance_) throw ShapeError("tensor shapes differ");
    }

private:
    static std::size_t count(int dim, std::size_t rank) {
        std::size_t c = 1;
        for (std::size_t i = 0; i < rank; ++i) c *= static_cast<std::size_t>(std::max(dim, 0));
        return c;
    }

    int dim_;
    std::vector<Variance> variance_;
    std::vector<T> entries_;
    std::vector<Symmetry> symmetries_;
};

using JetTensor = Tensor<Jet>;
using PointTensor = Tensor<Rational>;

inline std::vector<Variance> down(int rank) { return std::vector<Variance>(static_cast<std::size_t>(rank), Variance::down); }
inline std::vector<Variance> up(int rank) { return std::vector<Variance>(static_cast<std::size_t>(rank), Variance::up); }

/// The zero jet tensor with the given shape.
JetTensor zero_jet_tensor(int dim, std::vector<Variance> variance, int n_vars, int order);

/// Values at the origin (constant terms).
PointTensor at_origin(const JetTensor& t);

/// Constant jets of the given order with the point values as entries.
JetTensor to_jets(const PointTensor& t, int n_vars, int order);

JetTensor truncated(const JetTensor& t, int order);

/// Smallest order among the entries.
int order_of(const JetTensor& t);

/// Matrix (rank 2) tensor of jets inverted entrywise as a jet matrix. The
/// result has both slots of the opposite variance.
JetTensor matrix_inverse(const JetTensor& m);

/// Sum over m of omega(i,m) T(..., m, ...) with `slot` turned from up to down.
/// Throws ShapeError when the slot is not up and SingularityError when omega
/// is degenerate at the origin.
JetTensor omega_lower(const JetTensor& t, int slot, const JetTensor& omega);

/// Sum over m of omega_inv(i,m) T(..., m, ...), the exact inverse of
/// omega_lower when omega_inv is the inverse matrix of omega.
JetTensor omega_raise(const JetTensor& t, int slot, const JetTensor& omega_inv);

/// Trace over an up/down pair of slots.
template <class T>
Tensor<T> contract(const Tensor<T>& a, int slot_up, int slot_down);

enum class SymMode { symmetrize, antisymmetrize, cyclic_sum };

/// Symmetrization over the listed slots: the normalized (anti)symmetrizer,
/// or the unnormalized sum over cyclic shifts of the listed slots.
template <class T>
Tensor<T> sym_project(const Tensor<T>& t, const std::vector<int>& slots, SymMode mode);

/// result(i_0, ..., i_{r-1}) = t(i_{perm[0]}, ..., i_{perm[r-1]}).
template <class T>
Tensor<T> permute(const Tensor<T>& t, const std::vector<int>& perm);

/// Tensor of first partial derivatives, the new down slot appended last.
JetTensor partials(const JetTensor& t);

/// Sum of A(i, p, q, rest) over the (r+2)(r+1)/2 two-element subsets {p, q} of
/// the positions {1, ..., r+2}; the remaining indices keep their order. A must
/// be declared symmetric in slots (1, 2) and, when r >= 2, in the trailing block.
PointTensor veblen_sum(const PointTensor& a);

/// Number of terms veblen_sum adds for a tensor of rank r+3.
int veblen_term_count(int r);

/// Declares the symmetries a normal tensor A_{ijk a_1 .. a_r} carries.
void declare_normal_tensor_symmetries(PointTensor& a);

// --------------------------------------------------------------------------

template <class T>
Tensor<T> contract(const Tensor<T>& a, int slot_up, int slot_down) {
    if (slot_up < 0 || slot_down < 0 || slot_up >= a.rank() || slot_down >= a.rank() || slot_up == slot_down)
        throw ShapeError("contraction slots out of range");
    if (a.variance()[slot_up] != Variance::up || a.variance()[slot_down] != Variance::down)
        throw ShapeError("contraction needs one up and one down slot");
    std::vector<Variance> var;
    for (int s = 0; s < a.rank(); ++s)
        if (s != slot_up && s != slot_down) var.push_back(a.variance()[s]);
    const int rank = a.rank();
    MultiIndex full(static_cast<std::size_t>(rank));
    return Tensor<T>::generate(a.dim(), var, [&](const MultiIndex& idx) {
        for (int s = 0, k = 0; s < rank; ++s)
            if (s != slot_up && s != slot_down) full[s] = idx[k++];
        full[slot_up] = full[slot_down] = 0;
        T sum = a.at(full);
        for (int m = 1; m < a.dim(); ++m) {
            full[slot_up] = full[slot_down] = m;
            sum += a.at(full);
        }
        return sum;
    });
}

template <class T>
Tensor<T> permute(const Tensor<T>& t, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != t.rank()) throw ShapeError("permutation length differs from rank");
    // Result slot perm[s] reads source slot s.
    std::vector<Variance> var(perm.size());
    for (std::size_t s = 0; s < perm.size(); ++s) var[perm[s]] = t.variance()[s];
    MultiIndex src(perm.size());
    return Tensor<T>::generate(t.dim(), var, [&](const MultiIndex& idx) {
        for (std::size_t s = 0; s < perm.size(); ++s) src[s] = idx[perm[s]];
        return t.at(src);
    });
}

namespace detail {

inline int permutation_sign(const std::vector<int>& p) {
    int sign = 1;
    std::vector<int> q = p;
    for (std::size_t i = 0; i < q.size(); ++i)
        while (q[i] != static_cast<int>(i)) {
            std::swap(q[i], q[q[i]]);
            sign = -sign;
        }
    return sign;
}

}  // namespace detail

template <class T>
Tensor<T> sym_project(const Tensor<T>& t, const std::vector<int>& slots, SymMode mode) {
    for (int s : slots) {
        if (s < 0 || s >= t.rank()) throw ShapeError("symmetrization slot out of range");
        if (t.variance()[s] != t.variance()[slots.front()]) throw ShapeError("symmetrized slots differ in variance");
    }
    const std::size_t m = slots.size();
    std::vector<std::vector<int>> perms;
    std::vector<int> signs;
    if (mode == SymMode::cyclic_sum) {
        for (std::size_t shift = 0; shift < m; ++shift) {
            std::vector<int> p(m);
            for (std::size_t i = 0; i < m; ++i) p[i] = static_cast<int>((i + shift) % m);
            perms.push_back(p);
            signs.push_back(1);
        }
    } else {
        std::vector<int> p(m);
        std::iota(p.begin(), p.end(), 0);
        do {
            perms.push_back(p);
            signs.push_back(mode == SymMode::antisymmetrize ? detail::permutation_sign(p) : 1);
        } while (std::next_permutation(p.begin(), p.end()));
    }
    Rational norm = 1;
    if (mode != SymMode::cyclic_sum) norm = Rational(1, static_cast<unsigned long>(perms.size()));
    MultiIndex src(static_cast<std::size_t>(t.rank()));
    return Tensor<T>::generate(t.dim(), t.variance(), [&](const MultiIndex& idx) {
        T sum = t.at(idx) - t.at(idx);
        for (std::size_t k = 0; k < perms.size(); ++k) {
            src = idx;
            for (std::size_t i = 0; i < m; ++i) src[slots[i]] = idx[slots[perms[k][i]]];
            if (signs[k] > 0)
                sum += t.at(src);
            else
                sum -= t.at(src);
        }
        sum *= norm;
        return sum;
    });
}

}  // namespace sympconn
