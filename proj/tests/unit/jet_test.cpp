#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "float_eval.hpp"
#include "sympconn/errors.hpp"
#include "sympconn/jet.hpp"
#include "sympconn/matrix.hpp"

using namespace sympconn;
using sympconn::testing::evaluate;
using sympconn::testing::random_jet;
using sympconn::testing::random_point;

namespace {

Jet var(int n, int k, int v) { return Jet::variable(n, k, v); }

void expect_close(double a, double b, double scale) {
    EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, scale)) << a << " vs " << b;
}

}  // namespace

TEST(MonomialBasis, GradedLexOrder) {
    auto b = MonomialBasis::get(2, 2);
    ASSERT_EQ(b->size(), 6u);
    EXPECT_EQ(b->monomial(1), (Multidegree{1, 0}));
    EXPECT_EQ(b->monomial(2), (Multidegree{0, 1}));
    EXPECT_EQ(b->monomial(3), (Multidegree{2, 0}));
    EXPECT_EQ(b->monomial(5), (Multidegree{0, 2}));
    EXPECT_EQ(b->index_of({1, 1}), 4u);
    EXPECT_FALSE(b->index_of({2, 1}).has_value());
}

TEST(MonomialBasis, LowerOrderIsPrefix) {
    auto lo = MonomialBasis::get(3, 2);
    auto hi = MonomialBasis::get(3, 5);
    for (std::size_t i = 0; i < lo->size(); ++i) EXPECT_EQ(lo->monomial(i), hi->monomial(i));
}

TEST(Jet, DifferenceOfSquares) {
    Jet x = var(2, 2, 0), y = var(2, 2, 1);
    EXPECT_EQ(((x + y) * (x - y)).to_string({"x", "y"}), "1*x^2 - 1*y^2");
}

TEST(Jet, ProductTruncates) {
    const int k = 3;
    Jet x = var(1, k, 0);
    Jet xk = Jet::monomial(1, k, {k}, 1);
    EXPECT_TRUE((x * xk).is_zero());
    EXPECT_EQ((x * xk).to_string(), "0");
}

TEST(Jet, MixedOrdersUseTheMinimum) {
    Jet a = var(2, 4, 0), b = var(2, 2, 1);
    EXPECT_EQ((a + b).order(), 2);
    EXPECT_EQ((a * b).order(), 2);
}

TEST(Jet, MismatchedVariablesIsShapeError) {
    EXPECT_THROW(var(2, 2, 0) + var(3, 2, 0), ShapeError);
    EXPECT_THROW(ring_op(var(2, 2, 0), var(3, 2, 0), RingOp::mul), ShapeError);
}

TEST(Jet, ProductMatchesFloatEvaluation) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        Jet a = random_jet(rng, n, 6, 3), b = random_jet(rng, n, 6, 3);
        Jet p = ring_op(a, b, RingOp::mul);
        Jet s = ring_op(a, b, RingOp::sub);
        for (int k = 0; k < 10; ++k) {
            auto pt = random_point(rng, n, 0.7);
            const double ea = evaluate(a, pt), eb = evaluate(b, pt);
            expect_close(evaluate(p, pt), ea * eb, std::abs(ea * eb));
            expect_close(evaluate(s, pt), ea - eb, std::abs(ea) + std::abs(eb));
        }
    }
}

TEST(Jet, RingAxioms) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Jet a = random_jet(rng, 3, 4, 4), b = random_jet(rng, 3, 4, 4), c = random_jet(rng, 3, 4, 4);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
    }
}

TEST(Jet, TruncationConsistency) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        Jet a = random_jet(rng, 2, 5, 5), b = random_jet(rng, 2, 5, 5);
        b[0] = 2;
        EXPECT_EQ((a * b).truncated(3), a.truncated(3) * b.truncated(3));
        EXPECT_EQ(b.reciprocal().truncated(2), b.truncated(2).reciprocal());
        EXPECT_EQ(a.partial(1).truncated(2), a.truncated(3).partial(1));
    }
}

TEST(Jet, ReciprocalGeometricSeries) {
    Jet one = Jet::constant(1, 3, 1);
    EXPECT_EQ(one.reciprocal(), one);
    Jet r = (one + var(1, 3, 0)).reciprocal();
    EXPECT_EQ(r.to_string({"x"}), "1 - 1*x + 1*x^2 - 1*x^3");
}

TEST(Jet, ReciprocalMultipliesBack) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        Jet a = random_jet(rng, 3, 4, 4);
        a[0] = Rational(trial + 1) / 2;
        EXPECT_EQ(a * a.reciprocal(), Jet::constant(3, 4, 1));
    }
}

TEST(Jet, ReciprocalOfNonUnitIsSingular) { EXPECT_THROW(var(2, 3, 0).reciprocal(), SingularityError); }

TEST(Jet, Partial) {
    Jet x = var(2, 3, 0), y = var(2, 3, 1);
    Jet d = (x * x * y).partial(0);
    EXPECT_EQ(d.order(), 2);
    EXPECT_EQ(d.to_string({"x", "y"}), "2*x*y");
    EXPECT_TRUE(Jet::constant(2, 3, 7).partial(1).is_zero());
    EXPECT_THROW(x.partial(2), ShapeError);
}

TEST(Jet, MixedPartialsCommute) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        Jet a = random_jet(rng, 3, 5, 5);
        EXPECT_EQ(a.partial(0).partial(2), a.partial(2).partial(0));
    }
}

TEST(Jet, DerivativeAtOriginUsesFactorials) {
    Jet a = Jet::monomial(2, 4, {2, 1}, Rational(1, 3));
    EXPECT_EQ(a.derivative_at_origin({2, 1}), Rational(2, 3));
}

TEST(Jet, TimesVariableRaisesOrder) {
    Jet a = var(2, 2, 1) * var(2, 2, 1);
    Jet b = a.times_variable(0);
    EXPECT_EQ(b.order(), 3);
    EXPECT_EQ(b.coefficient({1, 2}), 1);
}

TEST(Compose, SquareOfSum) {
    Jet u = var(1, 2, 0);
    Jet a = u * u;
    std::vector<Jet> subs{var(2, 2, 0) + var(2, 2, 1)};
    EXPECT_EQ(compose(a, subs).to_string({"x", "y"}), "1*x^2 + 2*x*y + 1*y^2");
}

TEST(Compose, IdentitySubstitution) {
    std::mt19937_64 rng(9);
    Jet a = random_jet(rng, 3, 4, 4);
    std::vector<Jet> id{var(3, 4, 0), var(3, 4, 1), var(3, 4, 2)};
    EXPECT_EQ(compose(a, id), a);
}

TEST(Compose, ConstantTermIsRejected) {
    std::vector<Jet> subs{var(1, 2, 0) + Jet::constant(1, 2, 1)};
    EXPECT_THROW(compose(var(1, 2, 0), subs), PreconditionError);
}

TEST(Compose, ChainRule) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const int m = 2, n = 3, k = 4;
        Jet a = random_jet(rng, m, k, k);
        std::vector<Jet> s;
        for (int j = 0; j < m; ++j) s.push_back(random_jet(rng, n, k, k, 1));
        Jet lhs = compose(a, s);
        for (int v = 0; v < n; ++v) {
            Jet rhs(n, k - 1);
            for (int j = 0; j < m; ++j) rhs += compose(a.partial(j), s) * s[j].partial(v);
            EXPECT_EQ(lhs.partial(v), rhs);
        }
    }
}

TEST(Compose, MatchesFloatEvaluationForPolynomials) {
    std::mt19937_64 rng(21);
    // Degrees are kept low enough that nothing is truncated.
    Jet a = random_jet(rng, 2, 6, 3);
    std::vector<Jet> s{random_jet(rng, 2, 6, 2, 1), random_jet(rng, 2, 6, 2, 1)};
    Jet c = compose(a, s);
    for (int k = 0; k < 10; ++k) {
        auto pt = random_point(rng, 2, 0.5);
        std::vector<double> inner{evaluate(s[0], pt), evaluate(s[1], pt)};
        const double expect = evaluate(a, inner);
        expect_close(evaluate(c, pt), expect, std::abs(expect));
    }
}

TEST(InvertMap, Identity) {
    std::vector<Jet> id{var(2, 3, 0), var(2, 3, 1)};
    EXPECT_EQ(invert_map(id), id);
}

TEST(InvertMap, OneVariableReversion) {
    Jet x = var(2, 2, 0), y = var(2, 2, 1);
    std::vector<Jet> phi{x + x * x, y};
    auto psi = invert_map(phi);
    EXPECT_EQ(psi[0], x - x * x);
    EXPECT_EQ(psi[1], y);
}

TEST(InvertMap, RoundTrips) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 3, k = 4;
        std::vector<Jet> phi;
        for (int i = 0; i < n; ++i) phi.push_back(random_jet(rng, n, k, k, 2));
        // Unimodular linear part: upper triangular with unit diagonal.
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) phi[i][1 + j] = (i == j) ? Rational(1) : Rational(trial - j);
        auto psi = invert_map(phi);
        auto a = compose_all(phi, psi);
        auto b = compose_all(psi, phi);
        for (int i = 0; i < n; ++i) {
            EXPECT_EQ(a[i], var(n, k, i));
            EXPECT_EQ(b[i], var(n, k, i));
        }
    }
}

TEST(InvertMap, SingularLinearPart) {
    std::vector<Jet> phi{var(2, 2, 0), var(2, 2, 0)};
    EXPECT_THROW(invert_map(phi), SingularityError);
}

TEST(RadialAntiderivative, SimpleCases) {
    Jet x = var(2, 2, 0), y = var(2, 2, 1);
    std::vector<Jet> f{y, x};
    EXPECT_EQ(radial_antiderivative(f, 0).to_string({"x", "y"}), "1*x*y");
    std::vector<Jet> zero{Jet(2, 2), Jet(2, 2)};
    EXPECT_EQ(radial_antiderivative(zero, 5).to_string(), "5");
}

TEST(RadialAntiderivative, GradientRoundTrip) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Jet f0 = random_jet(rng, 3, 5, 5);
        std::vector<Jet> grad{f0.partial(0), f0.partial(1), f0.partial(2)};
        Jet f = radial_antiderivative(grad, Rational(7, 2));
        Jet expect = f0;
        expect[0] = Rational(7, 2);
        EXPECT_EQ(f, expect);
        for (int k = 0; k < 3; ++k) EXPECT_EQ(f.partial(k), grad[k]);
    }
}

TEST(RadialAntiderivative, IncompatibleInputNamesWitness) {
    Jet x = var(2, 2, 0);
    std::vector<Jet> f{Jet(2, 2), x};
    try {
        radial_antiderivative(f, 0);
        FAIL() << "expected an integrability error";
    } catch (const IntegrabilityError& e) {
        EXPECT_EQ(e.witness().indices, (std::vector<int>{0, 1}));
        EXPECT_EQ(e.witness().multidegree, (std::vector<int>{0, 0}));
    }
}

TEST(Matrix, InverseAndDeterminant) {
    RationalMatrix m{{0, 1}, {-1, 0}};
    EXPECT_EQ(determinant(m), 1);
    auto inv = inverse(m);
    EXPECT_EQ(inv[0][1], -1);
    EXPECT_EQ(inv[1][0], 1);
    EXPECT_THROW(inverse(RationalMatrix{{1, 2}, {2, 4}}), SingularityError);
}

TEST(Matrix, JetInverseMultipliesBack) {
    std::mt19937_64 rng(23);
    const int n = 3, k = 3;
    JetMatrix m(n, std::vector<Jet>(n, Jet(2, k)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = random_jet(rng, 2, k, k);
    // Zero diagonal at the origin forces a row exchange.
    for (int i = 0; i < n; ++i) m[i][i][0] = 0;
    m[0][1][0] = 1;
    m[1][2][0] = 1;
    m[2][0][0] = 1;
    auto inv = inverse(m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet s(2, k);
            for (int l = 0; l < n; ++l) s += m[i][l] * inv[l][j];
            EXPECT_EQ(s, Jet::constant(2, k, i == j ? 1 : 0));
        }
}
