// Acceptance checks. Prints one PASS/FAIL line per criterion; with arguments,
// runs only the named criteria. Exit status is 0 iff every selected one passes.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "conditions.hpp"
#include "linear.hpp"
#include "float_eval.hpp"
#include "geodesic.hpp"
#include "samplers.hpp"
#include "sympconn/chart_file.hpp"
#include "sympconn/curvature.hpp"
#include "sympconn/normal.hpp"
#include "sympconn/reconstruct.hpp"

using namespace sympconn;
namespace t = sympconn::testing;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            if (failures.size() < 5) failures.push_back(what);
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string str(const Rational& q) { return to_string(q); }

std::string str(const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
    return s + ")";
}

// Seeded random Fedosov charts cycling through n in {2, 4} and K in {3, 4}.
struct ChartSample {
    std::uint64_t seed;
    ChartSpec chart;
};

const std::vector<ChartSample>& random_charts() {
    static const std::vector<ChartSample> charts = [] {
        std::vector<ChartSample> out;
        const int dims[] = {2, 4, 2, 4}, orders[] = {3, 3, 4, 4};
        for (std::uint64_t s = 1; s <= 100; ++s) {
            const int v = static_cast<int>(s % 4);
            out.push_back({s, t::sample_chart(1000 + s, dims[v], orders[v])});
        }
        return out;
    }();
    return charts;
}

std::string chart_label(const ChartSample& s) {
    return "chart " + std::to_string(s.seed) + " (n=" + std::to_string(s.chart.dim()) +
           ", K=" + std::to_string(s.chart.order()) + ")";
}

// Random planes with omega(X, Y) != 0 at a fixture chart moved to several base points.
Outcome sectional_suite(const std::string& fixture, const std::vector<std::vector<Rational>>& points,
                        const Rational& det, int sign, std::mt19937_64& rng, int planes) {
    Outcome o;
    ChartFile f = parse_chart_file(slurp(fixture));
    for (const auto& p : points) {
        f.base_point = p;
        const ChartSpec c = build_chart(f);
        const PointTensor r0 = curvature_at_origin(c);
        const PointTensor w0 = at_origin(c.omega());
        int done = 0;
        while (done < planes) {
            const auto x = t::random_rational_vector(rng, 2), y = t::random_rational_vector(rng, 2);
            if (x[0] * y[1] - x[1] * y[0] == 0) continue;
            ++done;
            const SectionalClass s = sectional_classify(r0, w0, x, y);
            const std::string where = "point " + str(p) + " X=" + str(x) + " Y=" + str(y);
            o.require(s.kind == SectionalKind::elliptic, where + ": kind " + to_string(s.kind));
            o.require(s.det_invariant == det, where + ": det " + str(s.det_invariant) + ", expected " + str(det));
            o.require(s.sign == sign, where + ": sign " + std::to_string(s.sign) + ", expected " + std::to_string(sign));
        }
    }
    return o;
}

Outcome sphere_sectional() {
    const auto start = Clock::now();
    std::mt19937_64 rng(11);
    Outcome all;
    const std::vector<std::vector<Rational>> points{{0, 0}, {Rational(1, 2), Rational(-1, 3)}, {1, 2}};
    int elliptic_det_ok = 0, sign_ok = 0, total = 0;
    for (const auto& [name, radius] : std::vector<std::pair<std::string, Rational>>{
             {"sphere_r1", Rational(1)}, {"sphere_r2", Rational(2)}, {"sphere_r3_2", Rational(3, 2)}}) {
        const Rational det = 1 / (radius * radius * radius * radius);
        // Positive sign means r = 1/R^2.
        Outcome o = sectional_suite(std::string(SYMPCONN_FIXTURE_DIR) + "/" + name + ".json", points, det, +1, rng, 6);
        total += 1;
        bool kind_det = true, sign = true;
        for (const auto& f : o.failures) {
            if (f.find(": sign") != std::string::npos) sign = false;
            else kind_det = false;
        }
        elliptic_det_ok += kind_det;
        sign_ok += sign;
        all.passed = all.passed && o.passed;
        for (auto& f : o.failures)
            if (all.failures.size() < 3) all.failures.push_back(name + " " + f);
    }
    const double secs = seconds_since(start);
    all.require(secs < 10, "runtime " + std::to_string(secs) + " s");
    all.detail = "3 radii x 3 points x 6 planes; elliptic with det 1/R^4 for " + std::to_string(elliptic_det_ok) + "/" +
                 std::to_string(total) + " radii, positive sign for " + std::to_string(sign_ok) + "/" +
                 std::to_string(total) + "; " + std::to_string(secs).substr(0, 4) + " s";
    return all;
}

Outcome hyperbolic_sectional() {
    std::mt19937_64 rng(12);
    const std::vector<std::vector<Rational>> points{{0, 1}, {2, Rational(3, 2)}, {-1, Rational(1, 3)}};
    // Negative sign means r = -1.
    Outcome o = sectional_suite(std::string(SYMPCONN_FIXTURE_DIR) + "/hyperbolic.json", points, 1, -1, rng, 6);
    bool kind_det = true;
    for (const auto& f : o.failures)
        if (f.find(": sign") == std::string::npos) kind_det = false;
    o.detail = std::string("3 points x 6 planes; elliptic with det 1: ") + (kind_det ? "yes" : "no") +
               ", negative sign: " + (o.passed ? "yes" : "no");
    return o;
}

void require_report(Outcome& o, const ValidationReport& r, const std::string& where) {
    for (const auto& name : r.failures()) o.require(false, where + ": " + name);
}

Outcome identity_suite() {
    const auto start = Clock::now();
    Outcome o;
    std::size_t checks = 0;
    for (const auto& s : random_charts()) {
        const ChartSpec& c = s.chart;
        const std::string where = chart_label(s);
        const CurvatureData cd = curvature(c);
        for (const ValidationReport& r :
             {validate(c), identity_report(cd.low, c.omega_inv()), ricci(cd, c.omega_inv()).checks,
              derivative_identity_report(c), normal_family_report(normal_tensors(c, 2))}) {
            require_report(o, r, where);
            checks += r.checks.size();
        }
    }
    const double secs = seconds_since(start);
    o.require(secs < 60, "runtime " + std::to_string(secs) + " s");
    o.detail = "100 charts, " + std::to_string(checks) + " exact checks; " + std::to_string(secs).substr(0, 4) + " s";
    return o;
}

Outcome omega_second_extension() {
    Outcome o;
    for (const auto& s : random_charts()) {
        const ChartSpec& c = s.chart;
        const NormalFamily f = normal_tensors(c, 1);
        const PointTensor R = curvature_at_origin(c);
        bool ok = true;
        for_each_index(4, c.dim(), [&](const MultiIndex& I) {
            ok = ok && f.omega_ext[2](I[0], I[1], I[2], I[3]) == R(I[2], I[3], I[0], I[1]) / 3;
        });
        o.require(ok, chart_label(s));
    }
    o.detail = "omega_ij,kl = R_klij / 3 on 100 charts";
    return o;
}

Outcome symmetric_part_bijection() {
    Outcome o;
    std::mt19937_64 rng(5);
    int closed = 0;
    for (int sample = 0; sample < 100; ++sample) {
        const int n = sample % 2 ? 4 : 2, K = sample % 4 < 2 ? 3 : 4;
        const bool is_closed = sample % 3 != 2;
        const JetTensor omega = is_closed ? random_closed_omega(rng, n, K) : t::random_omega(rng, n, K);
        const JetTensor pi = t::random_symmetric_pi(rng, n, K);
        const JetTensor gamma =
            is_closed ? t::random_preserving_gamma(rng, omega, K)
                      : preserving_from_symmetric(t::random_symmetric_pi(rng, n, K), omega);
        const std::string where = "sample " + std::to_string(sample);

        const JetTensor from_pi = preserving_from_symmetric(pi, omega);
        const ChartSpec c1(K, omega, from_pi);
        o.require(validate(c1).find("connection_preserves_omega")->passed, where + ": Gamma(Pi) preserves omega");
        o.require(symmetric_part(c1).pi_lower == pi, where + ": Pi -> Gamma -> Pi");

        const ChartSpec c2(K, omega, gamma);
        o.require(validate(c2).find("connection_preserves_omega")->passed, where + ": sampled Gamma preserves omega");
        o.require(preserving_from_symmetric(symmetric_part(c2).pi_lower, omega) == gamma, where + ": Gamma -> Pi -> Gamma");

        if (is_closed) {
            ++closed;
            o.require(preserving_from_symmetric_general(pi, omega) == preserving_from_symmetric_closed(pi, omega),
                      where + ": general and closed formulas");
        }
    }
    o.detail = "100 samples (" + std::to_string(closed) + " with closed omega), both round trips and formula agreement";
    return o;
}

Outcome normal_coordinates() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    for (const auto& s : random_charts()) {
        const ChartSpec& c = s.chart;
        const int n = c.dim();
        const std::string where = chart_label(s);
        const ChartSpec normal = to_normal_chart(c);
        o.require(at_origin(normal.gamma_lower()).is_zero(), where + ": Gamma(0) != 0");
        o.require(geodesic_residual(normal).is_zero(), where + ": geodesic residual");

        const std::vector<Jet> phi = exponential_jets(c);
        const JetTensor& G = c.gamma_raised();
        auto field = [&](std::span<const double> x, std::span<double> out) {
            for (std::size_t e = 0; e < G.entries().size(); ++e) out[e] = t::evaluate(G.entries()[e], x);
        };
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> v(static_cast<std::size_t>(n));
            double norm = 0;
            for (auto& x : v) norm += (x = u(rng)) * x;
            for (auto& x : v) x *= 5e-3 / std::sqrt(norm);
            const std::vector<double> oracle = t::shoot_geodesic(field, v);
            double num = 0, den = 0;
            for (int i = 0; i < n; ++i) {
                const double e = t::evaluate(phi[i], v) - oracle[i];
                num += e * e;
                den += oracle[i] * oracle[i];
            }
            const double rel = std::sqrt(num / den);
            worst = std::max(worst, rel);
            o.require(rel < 1e-6, where + ": exponential map relative error " + std::to_string(rel));
        }
    }
    std::ostringstream d;
    d << "100 charts, 10 velocities each, worst relative error " << worst;
    o.detail = d.str();
    return o;
}

Outcome closed_forms() {
    Outcome o;
    for (const auto& s : random_charts()) {
        const ChartSpec& c = s.chart;
        const std::string where = chart_label(s);
        const NormalFamily f = normal_tensors(c, 2);
        const CurvatureData cd = curvature(c);
        const PointTensor r0 = at_origin(cd.low);
        const PointTensor r1 = at_origin(covariant_derivative(c, cd.low, 1));
        o.require(a1_cyclic(r0) == f.A[1], where + ": A1 cyclic form");
        o.require(a1_bianchi(r0) == f.A[1], where + ": A1 Bianchi form");
        o.require(a2_eliminated(r1) == f.A[2], where + ": A2 eliminated form");
        o.require(a2_explicit(r1) == f.A[2], where + ": A2 explicit form");
        o.require(curvature_from_a1(f.A[1]) == r0, where + ": R from A1");
        o.require(curvature_derivative_from_a2(f.A[2]) == r1, where + ": covariant derivative of R from A2");
    }
    o.detail = "100 charts, normal tensors from the exponential map against every closed form";
    return o;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "+" : "") + v[i];
    return s;
}

// A tensor violating `target` while satisfying as many of the other
// conditions as possible: all of them when such a tensor exists, else the
// largest subset found by dropping conditions one at a time.
struct Control {
    PointTensor tensor;
    bool single = false;
};

std::optional<Control> control_for(const std::vector<t::NamedCondition>& conditions, std::size_t target, int n,
                                   int rank) {
    std::vector<std::size_t> others;
    for (std::size_t s = 0; s < conditions.size(); ++s)
        if (s != target) others.push_back(s);
    for (std::size_t drop = 0; drop <= others.size(); ++drop) {
        // Subsets of `others` of size |others| - drop, in lexicographic order of the dropped set.
        std::vector<bool> dropped(others.size(), false);
        std::fill(dropped.end() - static_cast<std::ptrdiff_t>(drop), dropped.end(), true);
        do {
            std::vector<t::TensorMap> keep;
            for (std::size_t s = 0; s < others.size(); ++s)
                if (!dropped[s]) keep.push_back(conditions[others[s]].residual);
            if (auto v = t::violating_only(keep, conditions[target].residual, n, rank)) return Control{*v, drop == 0};
        } while (std::next_permutation(dropped.begin(), dropped.end()));
    }
    return std::nullopt;
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

Outcome realization() {
    Outcome o;
    for (int sample = 0; sample < 25; ++sample) {
        const ChartSpec c = t::sample_chart(2000 + sample, sample % 2 ? 4 : 2, 3);
        const PointTensor r0 = curvature_at_origin(c);
        const ChartSpec realized = realize_curvature(r0, at_origin(c.omega()));
        o.require(curvature_at_origin(realized) == r0, "curvature sample " + std::to_string(sample));
    }
    for (int sample = 0; sample < 25; ++sample) {
        const ChartSpec c = t::sample_chart(3000 + sample, sample % 2 ? 4 : 2, 4);
        const CurvatureData cd = curvature(c);
        const PointTensor r0 = at_origin(cd.low);
        const PointTensor r1 = at_origin(covariant_derivative(c, cd.low, 1));
        const ChartSpec realized = realize_curvature_derivative(r0, r1, at_origin(c.omega()));
        const CurvatureData got = curvature(realized);
        o.require(at_origin(got.low) == r0 && at_origin(covariant_derivative(realized, got.low, 1)) == r1,
                  "derivative sample " + std::to_string(sample));
    }

    const int n = 4;
    const PointTensor w = canonical_omega(n);
    std::vector<std::string> notes;
    auto run_controls = [&](const std::vector<t::NamedCondition>& conditions, int rank,
                            const std::function<void(const PointTensor&)>& realize_with,
                            const std::function<ValidationReport(const PointTensor&)>& conditions_of) {
        for (std::size_t k = 0; k < conditions.size(); ++k) {
            const std::string& name = conditions[k].name;
            const auto control = control_for(conditions, k, n, rank);
            if (!control) {
                o.require(false, name + ": no violating tensor");
                continue;
            }
            const std::vector<std::string> violated = conditions_of(control->tensor).failures();
            const std::vector<std::string> failed = rejection([&] { realize_with(control->tensor); });
            const bool named = std::find(failed.begin(), failed.end(), name) != failed.end();
            o.require(named && failed == violated, name + ": rejected naming " + join(failed));
            notes.push_back(control->single ? name : name + " (with " + join(violated) + ")");
        }
    };
    run_controls(t::curvature_condition_maps(), 4, [&](const PointTensor& r) { realize_curvature(r, w); },
                 curvature_conditions);
    run_controls(t::curvature_derivative_condition_maps(), 5,
                 [&](const PointTensor& r) { realize_curvature_derivative(std::nullopt, r, w); },
                 curvature_derivative_conditions);
    std::string list;
    for (std::size_t i = 0; i < notes.size(); ++i) list += (i ? ", " : "") + notes[i];
    o.detail = "25 + 25 exact round trips; controls at n=4 rejected: " + list;
    return o;
}

Outcome operator_L_routes() {
    Outcome o;
    std::mt19937_64 rng(9);
    for (const auto& s : random_charts()) {
        const JetTensor x = t::random_vector_field(rng, s.chart.dim(), s.chart.order());
        o.require(operator_L(s.chart, x).agree, chart_label(s));
    }
    o.detail = "100 (chart, vector field) pairs, second-derivative and Ricci routes agree";
    return o;
}

Outcome combinatorics() {
    Outcome o;
    for (long long n = 1; n <= 12; ++n) o.require(functional_dims(n).residual == 0, "dims n=" + std::to_string(n));
    for (int m = 2; m <= 8; ++m) {
        std::vector<int> J;
        for (int i = 0; i < m; ++i) J.push_back(i);
        const TriadSequence T = triad_sequence(J);
        o.require(static_cast<int>(T.triads.size()) == m * (m - 1) / 2 - 1, "triad count m=" + std::to_string(m));
        o.require(consecutive_overlap(T), "triad overlap m=" + std::to_string(m));
    }
    o.detail = "dimension residual 0 for n=1..12; triad counts and overlaps for m=2..8";
    return o;
}

struct Criterion {
    std::string name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {"sphere_sectional", sphere_sectional},
        {"hyperbolic_sectional", hyperbolic_sectional},
        {"identity_suite", identity_suite},
        {"omega_second_extension", omega_second_extension},
        {"symmetric_part_bijection", symmetric_part_bijection},
        {"normal_coordinates", normal_coordinates},
        {"closed_forms", closed_forms},
        {"realization", realization},
        {"operator_L", operator_L_routes},
        {"combinatorics", combinatorics},
    };
    std::set<std::string> selected(argv + 1, argv + argc);
    for (const auto& name : selected) {
        if (std::none_of(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.name == name; })) {
            std::cerr << "unknown criterion '" << name << "'\n";
            return 2;
        }
    }
    bool all = true;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.name)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.passed = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        std::cout << (o.passed ? "PASS " : "FAIL ") << c.name << ": " << o.detail;
        if (!o.failures.empty()) {
            std::cout << " | first failures:";
            for (const auto& f : o.failures) std::cout << " [" << f << "]";
        }
        std::cout << std::endl;
        all = all && o.passed;
    }
    return all ? 0 : 1;
}
