#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sympconn/rational.hpp"

namespace sympconn {

/// Exponent vector of a monomial x1^a1 ... xn^an.
using Multidegree = std::vector<int>;

/// Enumeration of all monomials in `n_vars` variables of total degree <= `order`,
/// in graded order (degree ascending, lexicographically descending inside a
/// degree). The basis of a lower order is a prefix of the basis of a higher one.
class MonomialBasis {
public:
    static constexpr std::uint32_t npos = UINT32_MAX;

    /// Shared, lazily built instance; safe to call from several threads.
    static std::shared_ptr<const MonomialBasis> get(int n_vars, int order);

    int n_vars() const noexcept { return n_vars_; }
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return monomials_.size(); }

    const Multidegree& monomial(std::size_t i) const { return monomials_[i]; }
    int degree(std::size_t i) const { return degrees_[i]; }

    /// Index of the first monomial of degree `d`; `degree_begin(order()+1) == size()`.
    std::size_t degree_begin(int d) const { return degree_begin_[static_cast<std::size_t>(d)]; }

    std::optional<std::size_t> index_of(const Multidegree& m) const;

    /// Index of monomial(i)*monomial(j), or npos when the degree exceeds order().
    std::uint32_t product(std::size_t i, std::size_t j) const { return product_[i * size() + j]; }

    /// Index of monomial(i) / x_v, or npos when x_v does not divide it.
    std::uint32_t lower(std::size_t i, int v) const { return lower_[i * n_vars_ + v]; }

    /// Index of monomial(i) * x_v, or npos when the degree exceeds order().
    std::uint32_t raise(std::size_t i, int v) const { return raise_[i * n_vars_ + v]; }

    MonomialBasis(int n_vars, int order);

private:
    int n_vars_;
    int order_;
    std::vector<Multidegree> monomials_;
    std::vector<int> degrees_;
    std::vector<std::size_t> degree_begin_;
    std::vector<std::uint32_t> product_;
    std::vector<std::uint32_t> lower_;
    std::vector<std::uint32_t> raise_;
};

/// Truncated multivariate power series with exact rational coefficients.
///
/// A jet of order K stores every Taylor coefficient of total degree <= K at the
/// origin. Binary operations on jets of different orders work at the smaller
/// order, and differentiation lowers the order by one, so a jet never claims
/// coefficients it cannot know.
class Jet {
public:
    /// The zero jet.
    Jet(int n_vars, int order);

    static Jet constant(int n_vars, int order, const Rational& value);
    /// The coordinate function x_v (0-based).
    static Jet variable(int n_vars, int order, int v);
    static Jet monomial(int n_vars, int order, const Multidegree& m, const Rational& coeff);

    int n_vars() const noexcept { return basis_->n_vars(); }
    int order() const noexcept { return basis_->order(); }
    const MonomialBasis& basis() const noexcept { return *basis_; }

    std::span<const Rational> coefficients() const noexcept { return coeffs_; }
    Rational& operator[](std::size_t i) { return coeffs_[i]; }
    const Rational& operator[](std::size_t i) const { return coeffs_[i]; }

    /// Coefficient of x^m; zero for monomials absent from the sum. Throws
    /// OrderError when the degree of m exceeds order().
    Rational coefficient(const Multidegree& m) const;
    void set_coefficient(const Multidegree& m, const Rational& value);

    const Rational& constant_term() const { return coeffs_.front(); }

    /// Value of the partial derivative d^m f at the origin, i.e. m! times the coefficient.
    Rational derivative_at_origin(const Multidegree& m) const;

    bool is_zero() const;
    /// First monomial (in basis order) with a nonzero coefficient.
    std::optional<Multidegree> first_nonzero() const;

    /// Drops every coefficient of degree > order.
    Jet truncated(int order) const;
    /// Pads with zero coefficients up to `order`. Only meaningful when the
    /// caller knows the padded coefficients cannot reach the retained result.
    Jet extended(int order) const;
    Jet homogeneous_part(int degree) const;

    Jet operator-() const;
    Jet& operator+=(const Jet& other);
    Jet& operator-=(const Jet& other);
    Jet& operator*=(const Rational& s);

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator*(const Rational& s, const Jet& a);
    friend Jet operator*(const Jet& a, const Rational& s) { return s * a; }
    friend bool operator==(const Jet& a, const Jet& b);

    /// Multiplicative inverse modulo degree order()+1. Throws SingularityError
    /// when the constant term vanishes.
    Jet reciprocal() const;

    /// d/dx_v (0-based); the result has order order()-1 (or stays 0).
    Jet partial(int v) const;

    /// Euler operator sum_v x_v d/dx_v: scales each homogeneous part by its degree.
    Jet euler() const;

    /// Exact product with x_v; the result is known up to order()+1.
    Jet times_variable(int v) const;

    /// Canonical text: terms `coeff*x1^a1*...` in basis order, exponent 1 written bare.
    std::string to_string(const std::vector<std::string>& names = {}) const;

private:
    explicit Jet(std::shared_ptr<const MonomialBasis> basis);

    std::shared_ptr<const MonomialBasis> basis_;
    std::vector<Rational> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const Jet& j);

enum class RingOp { add, sub, mul };

/// Ring operation on two jets; throws ShapeError on mismatched variable counts.
Jet ring_op(const Jet& a, const Jet& b, RingOp op);

/// Substitutes subs[j] (jets in n variables, zero constant terms) for the
/// j-th variable of `a`. The result has order min(a.order(), min subs order).
Jet compose(const Jet& a, std::span<const Jet> subs);

/// compose() for many outer jets sharing one substitution; the powers of the
/// substituted jets are computed once.
std::vector<Jet> compose_all(std::span<const Jet> outer, std::span<const Jet> subs);

/// Compositional inverse of a map with zero constant term and invertible
/// linear part. Throws SingularityError when the linear part is singular.
std::vector<Jet> invert_map(std::span<const Jet> phi);

/// Potential F with F(0) = c and dF/dx_k = f[k]. Each homogeneous part of
/// degree d is (1/d) sum_k x_k f_k^{(d-1)}. Throws IntegrabilityError naming
/// (k, l) and the multidegree when d f_k / dx_l != d f_l / dx_k.
Jet radial_antiderivative(std::span<const Jet> f, const Rational& c);

}  // namespace sympconn
