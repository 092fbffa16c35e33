#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "conditions.hpp"
#include "linear.hpp"
#include "sympconn/curvature.hpp"
#include "sympconn/normal.hpp"
#include "sympconn/reconstruct.hpp"

using namespace sympconn;
using sympconn::testing::curvature_condition_maps;
using sympconn::testing::curvature_derivative_condition_maps;
using sympconn::testing::single_violations;

namespace {

ChartSpec sample_chart(std::uint64_t seed, int dim, int order, bool coordinate_change = true) {
    std::mt19937_64 rng(seed);
    RandomChartOptions o;
    o.dim = dim;
    o.order = order;
    o.coordinate_change = coordinate_change;
    return random_chart(rng, o);
}

std::vector<std::string> rejection(const std::function<void()>& f) {
    try {
        f();
    } catch (const AdmissibilityError& e) {
        return e.failed();
    } catch (const ConditionError& e) {
        return {e.condition()};
    }
    return {};
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

// R_ijkl v_m for an algebraic curvature tensor R satisfies a1, b1 and c1 but in
// general not the second Bianchi identity.
PointTensor tensor_times_covector(const PointTensor& r0, const std::vector<Rational>& v) {
    const int n = r0.dim();
    PointTensor out(n, down(5), Rational(0));
    for_each_index(5, n, [&](const MultiIndex& I) { out.at(I) = r0(I[0], I[1], I[2], I[3]) * v[I[4]]; });
    return out;
}

}  // namespace

TEST(OmegaFromConnection, ZeroConnectionGivesConstantOmega) {
    const int n = 4, K = 3;
    JetTensor g = zero_jet_tensor(n, down(3), n, K - 1);
    JetTensor omega = omega_from_connection(g, canonical_omega(n));
    EXPECT_EQ(omega, to_jets(canonical_omega(n), n, K));
}

TEST(OmegaFromConnection, TotallySymmetricConnectionGivesConstantOmega) {
    ChartSpec c = sample_chart(3, 4, 4, false);
    JetTensor omega = omega_from_connection(c.gamma_lower(), canonical_omega(4));
    EXPECT_EQ(omega, c.omega());
}

TEST(OmegaFromConnection, RecoversOmegaOfRandomCharts) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        ChartSpec c = sample_chart(seed, seed % 2 ? 2 : 4, 3);
        JetTensor omega = omega_from_connection(c.gamma_lower(), at_origin(c.omega()));
        EXPECT_EQ(omega, c.omega()) << "seed " << seed;
    }
}

TEST(OmegaFromConnection, IncompatibleConnectionIsRejected) {
    const int n = 2, K = 3;
    JetTensor g = zero_jet_tensor(n, down(3), n, K - 1);
    g(0, 1, 1) = Jet::variable(n, K - 1, 0);
    try {
        omega_from_connection(g, canonical_omega(n));
        FAIL() << "expected an IntegrabilityError";
    } catch (const IntegrabilityError& e) {
        EXPECT_EQ(e.condition(), "omega_compatibility");
        EXPECT_EQ(e.witness().indices.size(), 4u);
    }
}

TEST(OmegaFromConnection, RejectsBadInput) {
    const int n = 2;
    JetTensor g = zero_jet_tensor(n, down(3), n, 2);
    PointTensor degenerate(n, down(2), Rational(0));
    EXPECT_EQ(rejection([&] { omega_from_connection(g, degenerate); }),
              std::vector<std::string>{"c_omega_nondegenerate"});
    PointTensor sym = canonical_omega(n);
    sym(1, 0) = 1;
    EXPECT_EQ(rejection([&] { omega_from_connection(g, sym); }), std::vector<std::string>{"c_omega_antisymmetric"});
    g(0, 0, 1) = Jet::constant(n, 2, 1);
    EXPECT_THROW(omega_from_connection(g, canonical_omega(n)), SymmetryError);
}

TEST(ChartFromNormalTensors, ZeroTensorsGiveFlatChart) {
    const int n = 4;
    std::vector<PointTensor> A{PointTensor(n, down(3), Rational(0)), PointTensor(n, down(4), Rational(0))};
    ChartSpec c = chart_from_normal_tensors(A, canonical_omega(n), 3);
    ChartSpec flat = darboux_flat(n, 3);
    EXPECT_EQ(c.omega(), flat.omega());
    EXPECT_EQ(c.gamma_lower(), flat.gamma_lower());
    EXPECT_EQ(c.provenance(), Provenance::reconstructed);
}

TEST(ChartFromNormalTensors, RoundTripsNormalChart) {
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        const int K = seed < 12 ? 3 : 4;
        ChartSpec c = sample_chart(seed, seed % 2 ? 2 : 4, K);
        NormalFamily f = normal_tensors(c, K - 1);
        ChartSpec normal = to_normal_chart(c);
        ChartSpec rebuilt = chart_from_normal_tensors(f.A, f.omega_ext[0], K, f.omega_ext);
        EXPECT_EQ(rebuilt.gamma_lower(), normal.gamma_lower()) << "seed " << seed;
        EXPECT_EQ(rebuilt.omega(), normal.omega()) << "seed " << seed;
        NormalFamily again = normal_tensors(rebuilt, K - 1);
        for (int r = 0; r < K; ++r) EXPECT_EQ(again.A[r], f.A[r]);
    }
}

TEST(ChartFromNormalTensors, DarbouxOmegaStaysConstantOnlyWithoutCurvature) {
    ChartSpec c = sample_chart(15, 4, 3);
    NormalFamily f = normal_tensors(c, 1);
    ChartSpec rebuilt = chart_from_normal_tensors(f.A, canonical_omega(4), 3);
    EXPECT_EQ(at_origin(rebuilt.omega()), canonical_omega(4));
    // omega_ij,kl = R_klij / 3, so omega is not constant in normal coordinates.
    EXPECT_NE(rebuilt.omega(), to_jets(canonical_omega(4), 4, 3));
    EXPECT_EQ(curvature_at_origin(rebuilt), curvature_at_origin(c));
}

TEST(ChartFromNormalTensors, OrderLimits) {
    const int n = 2;
    std::vector<PointTensor> A{PointTensor(n, down(3), Rational(0)), PointTensor(n, down(4), Rational(0))};
    EXPECT_NO_THROW(chart_from_normal_tensors(A, canonical_omega(n), 3));
    EXPECT_THROW(chart_from_normal_tensors(A, canonical_omega(n), 4), OrderError);
    EXPECT_THROW(chart_from_normal_tensors(A, canonical_omega(n), 1), OrderError);
    EXPECT_THROW(chart_from_normal_tensors({}, canonical_omega(n), 2), ShapeError);
}

TEST(ChartFromNormalTensors, NamesViolatedCondition) {
    const int n = 4;
    NormalFamily f = normal_tensors(sample_chart(16, n, 3), 2);
    const PointTensor& w = f.omega_ext[0];

    auto nonzero_a0 = f.A;
    nonzero_a0[0](0, 0, 0) = 1;
    EXPECT_EQ(rejection([&] { chart_from_normal_tensors(nonzero_a0, w, 3); }),
              std::vector<std::string>{"a_normal_tensor_symmetries"});

    auto asym = f.A;
    asym[1](0, 1, 2, 3) += 1;
    EXPECT_EQ(rejection([&] { chart_from_normal_tensors(asym, w, 3); }),
              std::vector<std::string>{"a_normal_tensor_symmetries"});

    auto trailing = f.A;
    trailing[2](0, 1, 1, 2, 3) += 1;
    EXPECT_EQ(rejection([&] { chart_from_normal_tensors(trailing, w, 4); }),
              std::vector<std::string>{"a_normal_tensor_symmetries"});

    // Totally symmetric in (j, k, l): the Veblen sum is 3 A_ijkl.
    auto veblen = f.A;
    for (int i = 0; i < n; ++i) {
        for (const auto& p : {std::array{0, 0, 1}, std::array{0, 1, 0}, std::array{1, 0, 0}})
            veblen[1](i, p[0], p[1], p[2]) += 1;
    }
    EXPECT_EQ(rejection([&] { chart_from_normal_tensors(veblen, w, 3); }),
              std::vector<std::string>{"b_veblen_identity"});

    auto bad_ext = f.omega_ext;
    bad_ext[1](0, 1, 2) += 1;
    bad_ext[1](1, 0, 2) -= 1;
    EXPECT_EQ(rejection([&] { chart_from_normal_tensors(f.A, w, 3, bad_ext); }),
              std::vector<std::string>{"e_omega_extension_relation"});

    auto sym_ext = f.omega_ext;
    sym_ext[1](0, 1, 2) += 1;
    EXPECT_EQ(rejection([&] { chart_from_normal_tensors(f.A, w, 3, sym_ext); }),
              std::vector<std::string>{"d_omega_extension_symmetries"});

    PointTensor degenerate(n, down(2), Rational(0));
    EXPECT_EQ(rejection([&] { chart_from_normal_tensors(f.A, degenerate, 3); }),
              std::vector<std::string>{"c_omega_nondegenerate"});
}

TEST(ChartFromNormalTensors, RejectsNormalTensorOfNonSymplecticCurvature) {
    // A = a1_cyclic(R) for R with the index symmetries of a torsion-free
    // curvature but not symmetric in its first pair: symmetric in (j, k) and
    // Veblen-free, yet not the normal tensor of an omega-preserving connection.
    const int n = 2;
    PointTensor r0(n, down(4), Rational(0));
    r0(0, 1, 0, 1) = 1;
    r0(0, 1, 1, 0) = -1;
    ASSERT_FALSE(curvature_conditions(r0).passed());
    PointTensor a1 = a1_cyclic(r0);
    PointTensor zero(n, down(3), Rational(0));
    EXPECT_EQ(rejection([&] { chart_from_normal_tensors({zero, a1}, canonical_omega(n), 3); }),
              std::vector<std::string>{"omega_compatibility"});
}

TEST(RealizeCurvature, RoundTripsRandomCurvature) {
    for (std::uint64_t seed = 20; seed < 24; ++seed) {
        const int n = seed % 2 ? 2 : 4;
        ChartSpec c = sample_chart(seed, n, 3);
        PointTensor r0 = curvature_at_origin(c);
        for (int K : {3, 4}) {
            ChartSpec realized = realize_curvature(r0, at_origin(c.omega()), K);
            EXPECT_EQ(realized.order(), K);
            EXPECT_EQ(curvature_at_origin(realized), r0);
            EXPECT_TRUE(validate(realized).passed());
        }
    }
    EXPECT_THROW(realize_curvature(PointTensor(2, down(4), Rational(0)), canonical_omega(2), 2), OrderError);
}

TEST(RealizeCurvature, ZeroCurvatureGivesFlatChart) {
    ChartSpec c = realize_curvature(PointTensor(4, down(4), Rational(0)), canonical_omega(4), 3);
    EXPECT_EQ(c.gamma_lower(), darboux_flat(4, 3).gamma_lower());
}

TEST(RealizeCurvature, SingleConditionViolationsAreNamed) {
    const auto conditions = curvature_condition_maps();
    const auto controls = single_violations(conditions, 4, 4);
    ASSERT_EQ(controls.size(), conditions.size());
    for (const auto& [name, r0] : controls) {
        const auto failed = rejection([&] { realize_curvature(r0, canonical_omega(4)); });
        EXPECT_EQ(failed, std::vector<std::string>{name});
    }
}

TEST(RealizeCurvature, SurfaceBianchiIsImplied) {
    const auto conditions = curvature_condition_maps();
    const auto controls = single_violations(conditions, 2, 4);
    std::vector<std::string> names;
    for (const auto& c : controls) names.push_back(c.first);
    EXPECT_EQ(names, (std::vector<std::string>{"a_antisymmetric_last_pair", "b_symmetric_first_pair"}));
}

TEST(RealizeCurvatureDerivative, RoundTripsIndependentData) {
    for (std::uint64_t seed = 30; seed < 33; ++seed) {
        const int n = seed % 2 ? 2 : 4;
        ChartSpec c0 = sample_chart(seed, n, 3);
        ChartSpec c1 = sample_chart(seed + 100, n, 4);
        PointTensor r0 = curvature_at_origin(c0);
        CurvatureData cd = curvature(c1);
        PointTensor r1 = at_origin(covariant_derivative(c1, cd.low, 1));
        const PointTensor w = canonical_omega(n);

        ChartSpec both = realize_curvature_derivative(r0, r1, w, 4);
        CurvatureData got = curvature(both);
        EXPECT_EQ(at_origin(got.low), r0);
        EXPECT_EQ(at_origin(covariant_derivative(both, got.low, 1)), r1);

        ChartSpec only = realize_curvature_derivative(std::nullopt, r1, w, 4);
        CurvatureData got1 = curvature(only);
        EXPECT_TRUE(at_origin(got1.low).is_zero());
        EXPECT_EQ(at_origin(covariant_derivative(only, got1.low, 1)), r1);
    }
    const PointTensor zero(2, down(5), Rational(0));
    EXPECT_THROW(realize_curvature_derivative(std::nullopt, zero, canonical_omega(2), 3), OrderError);
}

TEST(RealizeCurvatureDerivative, SecondBianchiFailureNamesIntegrability) {
    const int n = 4;
    PointTensor r0 = curvature_at_origin(sample_chart(40, n, 3));
    PointTensor r1 = tensor_times_covector(r0, {1, 0, 2, -1});
    const ValidationReport report = curvature_derivative_conditions(r1);
    EXPECT_EQ(report.failures(), (std::vector<std::string>{"d1_second_bianchi", "e1_integrability"}));
    const auto failed = rejection([&] { realize_curvature_derivative(std::nullopt, r1, canonical_omega(n)); });
    EXPECT_TRUE(contains(failed, "e1_integrability"));
    EXPECT_TRUE(contains(failed, "d1_second_bianchi"));
}

TEST(RealizeCurvatureDerivative, LeadingConditionViolationsAreNamed) {
    const int n = 4;
    PointTensor r1 = at_origin(covariant_derivative(sample_chart(41, n, 4), curvature(sample_chart(41, n, 4)).low, 1));
    auto a1 = r1;
    a1(0, 1, 2, 3, 0) += 1;
    EXPECT_TRUE(contains(rejection([&] { realize_curvature_derivative(std::nullopt, a1, canonical_omega(n)); }),
                         "a1_antisymmetric_last_pair"));
    auto b1 = r1;
    b1(0, 1, 2, 3, 0) += 1;
    b1(0, 1, 3, 2, 0) -= 1;
    const auto failed = rejection([&] { realize_curvature_derivative(std::nullopt, b1, canonical_omega(n)); });
    EXPECT_FALSE(contains(failed, "a1_antisymmetric_last_pair"));
    EXPECT_TRUE(contains(failed, "b1_symmetric_first_pair"));
}
