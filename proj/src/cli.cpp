#include "sympconn/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include "sympconn/chart_file.hpp"
#include "sympconn/curvature.hpp"
#include "sympconn/normal.hpp"
#include "sympconn/reconstruct.hpp"
#include "sympconn/serialize.hpp"

namespace sympconn {

namespace {

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

class UsageError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "usage"; }
};

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<Rational> parse_vector(const std::string& text, const std::string& flag) {
    std::vector<Rational> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(parse_rational(item));
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " in " + flag, 0, 0, flag);
        }
    }
    return v;
}

struct Loaded {
    ChartFile file;
    ChartSpec chart;
};

Loaded load(const std::string& path, std::optional<int> order, bool require_valid = true) {
    ChartFile file = parse_chart_file(read_input(path));
    ChartSpec chart = build_chart(file, order, require_valid);
    return {std::move(file), std::move(chart)};
}

Json header(const Loaded& l) {
    Json j;
    j["dimension"] = l.chart.dim();
    j["order"] = l.chart.order();
    j["coordinates"] = l.file.coordinates;
    Json base = Json::array();
    for (const auto& q : l.file.base_point) base.push_back(to_json(q));
    j["base_point"] = std::move(base);
    return j;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// selftest

struct Suite {
    std::string name;
    int passed = 0;
    int total = 0;
    void record(bool ok) {
        ++total;
        passed += ok ? 1 : 0;
    }
};

JetTensor random_vector_field(std::mt19937_64& rng, int n, int order) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    return JetTensor::generate(n, up(1), [&](const MultiIndex&) {
        Jet j(n, order);
        for (std::size_t m = 0; m < j.basis().size(); ++m) j[m] = coeff(rng);
        return j;
    });
}

int selftest(int charts, std::uint64_t seed, std::optional<int> order, std::ostream& out) {
    std::vector<Suite> suites{{"validate"},        {"curvature_identities"}, {"ricci"},
                              {"derivative_identities"}, {"normal_coordinates"},   {"normal_tensors"},
                              {"closed_forms"},    {"realize_curvature"},    {"operator_L"}};
    auto suite = [&](const std::string& name) -> Suite& {
        for (auto& s : suites)
            if (s.name == name) return s;
        throw std::logic_error("unknown suite " + name);
    };
    std::mt19937_64 rng(seed);
    for (int t = 0; t < charts; ++t) {
        RandomChartOptions o;
        o.dim = t % 2 ? 4 : 2;
        o.order = order.value_or(t % 4 < 2 ? 3 : 4);
        const ChartSpec c = random_chart(rng, o);
        auto guarded = [&](const std::string& name, const std::function<bool()>& f) {
            bool ok = false;
            try {
                ok = f();
            } catch (const Error&) {
                ok = false;
            }
            suite(name).record(ok);
        };
        guarded("validate", [&] { return validate(c).passed(); });
        const CurvatureData cd = curvature(c);
        guarded("curvature_identities", [&] { return identity_report(cd.low, c.omega_inv()).passed(); });
        guarded("ricci", [&] { return ricci(cd, c.omega_inv()).checks.passed(); });
        if (c.order() >= 3) guarded("derivative_identities", [&] { return derivative_identity_report(c).passed(); });
        guarded("normal_coordinates", [&] {
            const ChartSpec normal = to_normal_chart(c);
            return at_origin(normal.gamma_lower()).is_zero() && geodesic_residual(normal).is_zero();
        });
        guarded("normal_tensors", [&] { return normal_family_report(normal_tensors(c, c.order() - 1)).passed(); });
        if (c.order() >= 3)
            guarded("closed_forms", [&] {
                const NormalFamily f = normal_tensors(c, 2);
                const PointTensor r0 = at_origin(cd.low);
                const PointTensor r1 = at_origin(covariant_derivative(c, cd.low, 1));
                return a1_cyclic(r0) == f.A[1] && a1_bianchi(r0) == f.A[1] && a2_eliminated(r1) == f.A[2] &&
                       a2_explicit(r1) == f.A[2] && curvature_from_a1(f.A[1]) == r0 &&
                       curvature_derivative_from_a2(f.A[2]) == r1;
            });
        guarded("realize_curvature", [&] {
            const PointTensor r0 = at_origin(cd.low);
            return curvature_at_origin(realize_curvature(r0, at_origin(c.omega()), 3)) == r0;
        });
        guarded("operator_L", [&] { return operator_L(c, random_vector_field(rng, c.dim(), c.order())).agree; });
    }
    bool all = true;
    for (const auto& s : suites) {
        out << s.name << ": " << s.passed << "/" << s.total << " passed\n";
        all = all && s.passed == s.total;
    }
    return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact local computations on Fedosov manifolds", "sympconn"};
    app.require_subcommand(1);
    std::optional<int> order;
    std::uint64_t seed = 1;
    app.add_option("--order", order, "Truncation order K, overriding the file");
    app.add_option("--seed", seed, "Seed for selftest");

    std::string file;
    bool at_base = false;
    std::string xs, ys;
    std::optional<int> rmax;
    long long dims_n = 0;
    int charts = 10;

    auto* check = app.add_subcommand("check", "Validate a chart and run the identity checks");
    check->add_option("FILE", file)->required();
    auto* curv = app.add_subcommand("curvature", "Lowered curvature tensor R_ijkl");
    curv->add_option("FILE", file)->required();
    curv->add_flag("--at-base", at_base, "Values at the base point instead of jets");
    auto* ric = app.add_subcommand("ricci", "Ricci tensor and its checks");
    ric->add_option("FILE", file)->required();
    ric->add_flag("--at-base", at_base, "Values at the base point instead of jets");
    auto* sec = app.add_subcommand("sectional", "Sectional curvature class of the plane spanned by X and Y");
    sec->add_option("FILE", file)->required();
    sec->add_option("--x", xs, "Comma-separated rationals")->required();
    sec->add_option("--y", ys, "Comma-separated rationals")->required();
    auto* nt = app.add_subcommand("normal-tensors", "Affine normal tensors and omega extensions");
    nt->add_option("FILE", file)->required();
    nt->add_option("--rmax", rmax, "Largest normal tensor order (default K-1)");
    auto* rea = app.add_subcommand("realize", "Chart realizing prescribed curvature data");
    rea->add_option("POINTFILE", file)->required();
    auto* dims = app.add_subcommand("dims", "Connection symbol counts");
    dims->add_option("N", dims_n)->required();
    auto* self = app.add_subcommand("selftest", "Property suites on random charts");
    self->add_option("--charts", charts, "Number of random charts")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        emit(err, error_json(UsageError(e.what())));
        return 2;
    }

    try {
        if (*check) {
            Loaded l = load(file, order, false);
            Json j = header(l);
            const ValidationReport v = validate(l.chart);
            j["validate"] = to_json(v);
            bool passed = v.passed();
            j["identities"] = nullptr;
            j["derivative_identities"] = nullptr;
            if (passed) {
                const CurvatureData cd = curvature(l.chart);
                const ValidationReport ids = identity_report(cd.low, l.chart.omega_inv());
                j["identities"] = to_json(ids);
                passed = passed && ids.passed();
                if (l.chart.order() >= 3) {
                    const ValidationReport d = derivative_identity_report(l.chart);
                    j["derivative_identities"] = to_json(d);
                    passed = passed && d.passed();
                }
            }
            Json result;
            result["passed"] = passed;
            result.update(j);
            emit(out, result);
            return passed ? 0 : 1;
        }
        if (*curv) {
            Loaded l = load(file, order);
            const CurvatureData cd = curvature(l.chart);
            Json j = header(l);
            j["at_base"] = at_base;
            j["R_low"] = at_base ? to_json(at_origin(cd.low)) : to_json(cd.low, l.file.coordinates);
            if (!at_base) j["R_order"] = cd.order;
            emit(out, j);
            return 0;
        }
        if (*ric) {
            Loaded l = load(file, order);
            const CurvatureData cd = curvature(l.chart);
            const RicciResult r = ricci(cd, l.chart.omega_inv());
            const EinsteinResult e = einstein_residual(l.chart);
            Json j = header(l);
            j["at_base"] = at_base;
            j["K"] = at_base ? to_json(at_origin(r.K)) : to_json(r.K, l.file.coordinates);
            j["checks"] = to_json(r.checks);
            j["einstein"] = e.einstein;
            emit(out, j);
            return r.checks.passed() ? 0 : 1;
        }
        if (*sec) {
            Loaded l = load(file, order);
            const SectionalClass s = sectional_classify(curvature_at_origin(l.chart), at_origin(l.chart.omega()),
                                                        parse_vector(xs, "--x"), parse_vector(ys, "--y"));
            Json j = header(l);
            j.update(to_json(s));
            emit(out, j);
            return 0;
        }
        if (*nt) {
            Loaded l = load(file, order);
            const NormalFamily f = normal_tensors(l.chart, rmax.value_or(l.chart.order() - 1));
            Json j = header(l);
            j.update(to_json(f));
            emit(out, j);
            return 0;
        }
        if (*rea) {
            const PointData d = parse_point_data(read_input(file));
            const ChartSpec c = realize(d, order);
            out << write_chart_file(chart_file_from(c, d.coordinates));
            return 0;
        }
        if (*dims) {
            emit(out, to_json(functional_dims(dims_n)));
            return 0;
        }
        if (*self) return selftest(charts, seed, order, out);
    } catch (const InvalidChartError& e) {
        emit(err, error_json(e));
        return 2;
    } catch (const ConditionError& e) {
        emit(err, error_json(e));
        return 1;
    } catch (const std::exception& e) {
        emit(err, error_json(e));
        return 2;
    }
    return 2;
}

}  // namespace sympconn
