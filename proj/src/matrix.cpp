#include "sympconn/matrix.hpp"

#include <utility>

#include "sympconn/errors.hpp"

namespace sympconn {

namespace {

void require_square(std::size_t rows, const auto& m) {
    for (const auto& row : m)
        if (row.size() != rows) throw ShapeError("matrix must be square");
}

}  // namespace

Rational determinant(RationalMatrix m) {
    const std::size_t n = m.size();
    require_square(n, m);
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            const Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

RationalMatrix inverse(RationalMatrix m) {
    const std::size_t n = m.size();
    require_square(n, m);
    RationalMatrix inv(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) throw SingularityError("matrix is singular");
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        const Rational s = 1 / m[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            m[c][k] *= s;
            inv[c][k] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            const Rational f = m[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                m[r][k] -= f * m[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

JetMatrix inverse(JetMatrix m) {
    const std::size_t n = m.size();
    require_square(n, m);
    if (n == 0) return m;
    const int vars = m[0][0].n_vars();
    int order = m[0][0].order();
    for (const auto& row : m)
        for (const auto& e : row) order = std::min(order, e.order());
    JetMatrix inv(n, std::vector<Jet>(n, Jet(vars, order)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Jet::constant(vars, order, 1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c].constant_term() == 0) ++p;
        if (p == n) throw SingularityError("matrix of jets is singular at the origin");
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        const Jet s = m[c][c].reciprocal();
        for (std::size_t k = 0; k < n; ++k) {
            m[c][k] = m[c][k] * s;
            inv[c][k] = inv[c][k] * s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c].is_zero()) continue;
            const Jet f = m[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                m[r][k] -= f * m[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

JetMatrix constant_part(const JetMatrix& m) {
    JetMatrix r;
    for (const auto& row : m) {
        std::vector<Jet> out;
        for (const auto& e : row) out.push_back(Jet::constant(e.n_vars(), e.order(), e.constant_term()));
        r.push_back(std::move(out));
    }
    return r;
}

}  // namespace sympconn
