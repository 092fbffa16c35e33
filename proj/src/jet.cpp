#include "sympconn/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "sympconn/errors.hpp"
#include "sympconn/matrix.hpp"

namespace sympconn {

namespace {

// Appends all exponent vectors of total degree `degree` in lexicographically
// descending order.
void enumerate_degree(int n, int degree, Multidegree& current, int pos, std::vector<Multidegree>& out) {
    if (pos == n - 1) {
        current[pos] = degree;
        out.push_back(current);
        return;
    }
    for (int e = degree; e >= 0; --e) {
        current[pos] = e;
        enumerate_degree(n, degree - e, current, pos + 1, out);
    }
}

void require_same_vars(const Jet& a, const Jet& b) {
    if (a.n_vars() != b.n_vars())
        throw ShapeError("jets in " + std::to_string(a.n_vars()) + " and " + std::to_string(b.n_vars()) +
                         " variables cannot be combined");
}

Rational factorial_weight(const Multidegree& m) {
    mpz_class w = 1;
    for (int e : m) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(e));
        w *= f;
    }
    return Rational(w);
}

}  // namespace

MonomialBasis::MonomialBasis(int n_vars, int order) : n_vars_(n_vars), order_(order) {
    if (n_vars < 1) throw ShapeError("a jet needs at least one variable");
    if (order < 0) throw OrderError("jet order must be non-negative");
    Multidegree current(static_cast<std::size_t>(n_vars), 0);
    for (int d = 0; d <= order; ++d) {
        degree_begin_.push_back(monomials_.size());
        enumerate_degree(n_vars, d, current, 0, monomials_);
    }
    degree_begin_.push_back(monomials_.size());
    for (const auto& m : monomials_) {
        int d = 0;
        for (int e : m) d += e;
        degrees_.push_back(d);
    }

    std::map<Multidegree, std::uint32_t> index;
    for (std::size_t i = 0; i < monomials_.size(); ++i) index.emplace(monomials_[i], static_cast<std::uint32_t>(i));

    const std::size_t count = monomials_.size();
    product_.assign(count * count, npos);
    Multidegree sum(static_cast<std::size_t>(n_vars));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            if (degrees_[i] + degrees_[j] > order) continue;
            for (int v = 0; v < n_vars; ++v) sum[v] = monomials_[i][v] + monomials_[j][v];
            product_[i * count + j] = index.at(sum);
        }
    }
    lower_.assign(count * static_cast<std::size_t>(n_vars), npos);
    raise_.assign(count * static_cast<std::size_t>(n_vars), npos);
    for (std::size_t i = 0; i < count; ++i) {
        for (int v = 0; v < n_vars; ++v) {
            Multidegree m = monomials_[i];
            if (m[v] > 0) {
                --m[v];
                lower_[i * n_vars + v] = index.at(m);
                ++m[v];
            }
            if (degrees_[i] < order) {
                ++m[v];
                raise_[i * n_vars + v] = index.at(m);
            }
        }
    }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int n_vars, int order) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{n_vars, order}];
    if (!slot) slot = std::make_shared<const MonomialBasis>(n_vars, order);
    return slot;
}

std::optional<std::size_t> MonomialBasis::index_of(const Multidegree& m) const {
    if (static_cast<int>(m.size()) != n_vars_) return std::nullopt;
    int d = 0;
    for (int e : m) {
        if (e < 0) return std::nullopt;
        d += e;
    }
    if (d > order_) return std::nullopt;
    auto first = monomials_.begin() + static_cast<std::ptrdiff_t>(degree_begin(d));
    auto last = monomials_.begin() + static_cast<std::ptrdiff_t>(degree_begin(d + 1));
    // Inside one degree the monomials are sorted lexicographically descending.
    auto it = std::lower_bound(first, last, m, std::greater<>());
    if (it == last || *it != m) return std::nullopt;
    return static_cast<std::size_t>(it - monomials_.begin());
}

// --------------------------------------------------------------------------
// Jet

Jet::Jet(std::shared_ptr<const MonomialBasis> basis) : basis_(std::move(basis)), coeffs_(basis_->size()) {}

Jet::Jet(int n_vars, int order) : Jet(MonomialBasis::get(n_vars, order)) {}

Jet Jet::constant(int n_vars, int order, const Rational& value) {
    Jet j(n_vars, order);
    j.coeffs_[0] = value;
    return j;
}

Jet Jet::variable(int n_vars, int order, int v) {
    if (v < 0 || v >= n_vars) throw ShapeError("variable index out of range");
    Jet j(n_vars, order);
    if (order >= 1) j.coeffs_[1 + static_cast<std::size_t>(v)] = 1;
    return j;
}

Jet Jet::monomial(int n_vars, int order, const Multidegree& m, const Rational& coeff) {
    Jet j(n_vars, order);
    j.set_coefficient(m, coeff);
    return j;
}

Rational Jet::coefficient(const Multidegree& m) const {
    auto idx = basis_->index_of(m);
    if (!idx) {
        if (static_cast<int>(m.size()) != n_vars()) throw ShapeError("multidegree has the wrong length");
        throw OrderError("monomial degree exceeds the jet order");
    }
    return coeffs_[*idx];
}

void Jet::set_coefficient(const Multidegree& m, const Rational& value) {
    auto idx = basis_->index_of(m);
    if (!idx) throw OrderError("monomial outside the jet basis");
    coeffs_[*idx] = value;
}

Rational Jet::derivative_at_origin(const Multidegree& m) const { return coefficient(m) * factorial_weight(m); }

bool Jet::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& q) { return q == 0; });
}

std::optional<Multidegree> Jet::first_nonzero() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) return basis_->monomial(i);
    return std::nullopt;
}

Jet Jet::truncated(int order) const {
    if (order >= this->order()) return *this;
    if (order < 0) throw OrderError("negative truncation order");
    Jet r(n_vars(), order);
    std::copy_n(coeffs_.begin(), r.coeffs_.size(), r.coeffs_.begin());
    return r;
}

Jet Jet::extended(int order) const {
    if (order <= this->order()) return truncated(order);
    Jet r(n_vars(), order);
    std::copy(coeffs_.begin(), coeffs_.end(), r.coeffs_.begin());
    return r;
}

Jet Jet::homogeneous_part(int degree) const {
    Jet r(basis_);
    if (degree < 0 || degree > order()) return r;
    for (std::size_t i = basis_->degree_begin(degree); i < basis_->degree_begin(degree + 1); ++i) r.coeffs_[i] = coeffs_[i];
    return r;
}

Jet Jet::operator-() const {
    Jet r(basis_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = -coeffs_[i];
    return r;
}

Jet& Jet::operator+=(const Jet& other) {
    require_same_vars(*this, other);
    if (other.order() < order()) *this = truncated(other.order());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& other) {
    require_same_vars(*this, other);
    if (other.order() < order()) *this = truncated(other.order());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(const Rational& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
    Jet r = a;
    r += b;
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    Jet r = a;
    r -= b;
    return r;
}

Jet operator*(const Rational& s, const Jet& a) {
    Jet r = a;
    r *= s;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    require_same_vars(a, b);
    const int order = std::min(a.order(), b.order());
    Jet r(a.n_vars(), order);
    const MonomialBasis& basis = *r.basis_;
    mpq_class t;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        const std::size_t jmax = basis.degree_begin(order - basis.degree(i) + 1);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (b.coeffs_[j] == 0) continue;
            mpq_mul(t.get_mpq_t(), a.coeffs_[i].get_mpq_t(), b.coeffs_[j].get_mpq_t());
            auto& target = r.coeffs_[basis.product(i, j)];
            mpq_add(target.get_mpq_t(), target.get_mpq_t(), t.get_mpq_t());
        }
    }
    return r;
}

bool operator==(const Jet& a, const Jet& b) {
    return a.n_vars() == b.n_vars() && a.order() == b.order() && a.coeffs_ == b.coeffs_;
}

Jet Jet::reciprocal() const {
    const Rational& a0 = constant_term();
    if (a0 == 0) throw SingularityError("reciprocal of a jet with zero constant term");
    const Rational inv0 = 1 / a0;
    Jet r(basis_);
    r.coeffs_[0] = inv0;
    const MonomialBasis& basis = *basis_;
    mpq_class t;
    // Degree d of a*r = 0 for d >= 1 determines the degree d part of r from lower ones.
    for (int d = 1; d <= order(); ++d) {
        std::vector<Rational> acc(basis.degree_begin(d + 1) - basis.degree_begin(d));
        for (std::size_t i = basis.degree_begin(1); i < basis.degree_begin(d + 1); ++i) {
            if (coeffs_[i] == 0) continue;
            const int e = d - basis.degree(i);
            for (std::size_t j = basis.degree_begin(e); j < basis.degree_begin(e + 1); ++j) {
                if (r.coeffs_[j] == 0) continue;
                mpq_mul(t.get_mpq_t(), coeffs_[i].get_mpq_t(), r.coeffs_[j].get_mpq_t());
                auto& target = acc[basis.product(i, j) - basis.degree_begin(d)];
                mpq_add(target.get_mpq_t(), target.get_mpq_t(), t.get_mpq_t());
            }
        }
        for (std::size_t k = 0; k < acc.size(); ++k) r.coeffs_[basis.degree_begin(d) + k] = -acc[k] * inv0;
    }
    return r;
}

Jet Jet::partial(int v) const {
    if (v < 0 || v >= n_vars()) throw ShapeError("partial derivative index out of range");
    Jet r(n_vars(), std::max(order() - 1, 0));
    if (order() == 0) return r;
    for (std::size_t i = basis_->degree_begin(1); i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        const int e = basis_->monomial(i)[v];
        if (e == 0) continue;
        r.coeffs_[basis_->lower(i, v)] += coeffs_[i] * e;
    }
    return r;
}

Jet Jet::euler() const {
    Jet r(basis_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = coeffs_[i] * basis_->degree(i);
    return r;
}

Jet Jet::times_variable(int v) const {
    if (v < 0 || v >= n_vars()) throw ShapeError("variable index out of range");
    Jet r(n_vars(), order() + 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) r.coeffs_[r.basis_->raise(i, v)] = coeffs_[i];
    return r;
}

std::string Jet::to_string(const std::vector<std::string>& names) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const Rational& c = coeffs_[i];
        if (c == 0) continue;
        if (first) {
            if (c < 0) os << '-';
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        os << sympconn::to_string(abs(c));
        const Multidegree& m = basis_->monomial(i);
        for (int v = 0; v < n_vars(); ++v) {
            if (m[v] == 0) continue;
            os << '*' << (static_cast<std::size_t>(v) < names.size() ? names[v] : "x" + std::to_string(v + 1));
            if (m[v] > 1) os << '^' << m[v];
        }
    }
    if (first) return "0";
    return os.str();
}

// --------------------------------------------------------------------------
// Free functions

std::ostream& operator<<(std::ostream& os, const Jet& j) { return os << j.to_string(); }

Jet ring_op(const Jet& a, const Jet& b, RingOp op) {
    switch (op) {
        case RingOp::add: return a + b;
        case RingOp::sub: return a - b;
        case RingOp::mul: return a * b;
    }
    throw PreconditionError("unknown ring operation");
}

std::vector<Jet> compose_all(std::span<const Jet> outer, std::span<const Jet> subs) {
    if (outer.empty()) return {};
    const int m = outer.front().n_vars();
    if (static_cast<int>(subs.size()) != m)
        throw ShapeError("composition needs one substituted jet per outer variable");
    const int n = subs.front().n_vars();
    int sub_order = subs.front().order();
    for (const auto& s : subs) {
        if (s.n_vars() != n) throw ShapeError("substituted jets must share their variables");
        if (s.constant_term() != 0)
            throw PreconditionError("composition requires substituted jets with zero constant term");
        sub_order = std::min(sub_order, s.order());
    }
    int max_outer = 0;
    for (const auto& a : outer) {
        if (a.n_vars() != m) throw ShapeError("outer jets must share their variables");
        max_outer = std::max(max_outer, std::min(a.order(), sub_order));
    }

    // powers[i] = subs^monomial(i); each is built from a lower one times one substituted jet.
    auto basis = MonomialBasis::get(m, max_outer);
    std::vector<Jet> truncated_subs;
    for (const auto& s : subs) truncated_subs.push_back(s.truncated(max_outer));
    std::vector<Jet> powers;
    powers.reserve(basis->size());
    powers.push_back(Jet::constant(n, max_outer, 1));
    for (std::size_t i = 1; i < basis->size(); ++i) {
        const Multidegree& mono = basis->monomial(i);
        int v = 0;
        while (mono[v] == 0) ++v;
        powers.push_back(powers[basis->lower(i, v)] * truncated_subs[v]);
    }

    std::vector<Jet> result;
    result.reserve(outer.size());
    mpq_class t;
    for (const auto& a : outer) {
        const int order = std::min(a.order(), sub_order);
        Jet r(n, order);
        const std::size_t limit = basis->degree_begin(order + 1);
        for (std::size_t i = 0; i < limit; ++i) {
            if (a[i] == 0) continue;
            const Jet& p = powers[i];
            // Powers of degree d have no terms below degree d.
            const std::size_t first = r.basis().degree_begin(basis->degree(i));
            const std::size_t last = r.basis().size();
            for (std::size_t k = first; k < last; ++k) {
                if (p[k] == 0) continue;
                mpq_mul(t.get_mpq_t(), a[i].get_mpq_t(), p[k].get_mpq_t());
                mpq_add(r[k].get_mpq_t(), r[k].get_mpq_t(), t.get_mpq_t());
            }
        }
        result.push_back(std::move(r));
    }
    return result;
}

Jet compose(const Jet& a, std::span<const Jet> subs) { return compose_all(std::span<const Jet>(&a, 1), subs).front(); }

std::vector<Jet> invert_map(std::span<const Jet> phi) {
    const int n = static_cast<int>(phi.size());
    if (n == 0) throw ShapeError("cannot invert an empty map");
    int order = phi.front().order();
    for (const auto& p : phi) {
        if (p.n_vars() != n) throw ShapeError("map must be square");
        if (p.constant_term() != 0) throw PreconditionError("map must fix the origin");
        order = std::min(order, p.order());
    }
    if (order < 1) throw OrderError("inverting a map needs its linear part");

    RationalMatrix linear(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int v = 0; v < n; ++v) linear[i][v] = phi[i][1 + static_cast<std::size_t>(v)];
    const RationalMatrix linv = inverse(linear);

    // phi = L x + N(x); the fixed point psi = L^{-1}(y - N(psi)) gains a degree per sweep.
    std::vector<Jet> nonlinear;
    for (int i = 0; i < n; ++i) {
        Jet q = phi[i].truncated(order);
        for (int v = 0; v < n; ++v) q[1 + static_cast<std::size_t>(v)] = 0;
        nonlinear.push_back(std::move(q));
    }
    std::vector<Jet> psi;
    for (int i = 0; i < n; ++i) {
        Jet p(n, order);
        for (int v = 0; v < n; ++v) p[1 + static_cast<std::size_t>(v)] = linv[i][v];
        psi.push_back(std::move(p));
    }
    for (int sweep = 1; sweep < order; ++sweep) {
        auto n_of_psi = compose_all(nonlinear, psi);
        std::vector<Jet> next;
        for (int i = 0; i < n; ++i) {
            Jet p(n, order);
            for (int j = 0; j < n; ++j) {
                if (linv[i][j] == 0) continue;
                p += linv[i][j] * (Jet::variable(n, order, j) - n_of_psi[j]);
            }
            next.push_back(std::move(p));
        }
        psi = std::move(next);
    }
    return psi;
}

Jet radial_antiderivative(std::span<const Jet> f, const Rational& c) {
    const int n = static_cast<int>(f.size());
    if (n == 0) throw ShapeError("radial antiderivative needs at least one component");
    int order = f.front().order();
    for (const auto& fk : f) {
        if (fk.n_vars() != n) throw ShapeError("one component per variable is required");
        order = std::min(order, fk.order());
    }
    if (order >= 1) {
        for (int k = 0; k < n; ++k) {
            for (int l = k + 1; l < n; ++l) {
                Jet diff = f[k].partial(l) - f[l].partial(k);
                if (auto md = diff.first_nonzero())
                    throw IntegrabilityError("cross_derivative_symmetry", Witness{{k, l}, *md},
                                             "components are not the gradient of a potential");
            }
        }
    }
    Jet result(n, order + 1);
    result[0] = c;
    const MonomialBasis& basis = result.basis();
    for (std::size_t i = basis.degree_begin(1); i < basis.size(); ++i) {
        Rational sum;
        for (int k = 0; k < n; ++k) {
            const auto below = basis.lower(i, k);
            if (below != MonomialBasis::npos) sum += f[k][below];
        }
        result[i] = sum / basis.degree(i);
    }
    return result;
}

}  // namespace sympconn
