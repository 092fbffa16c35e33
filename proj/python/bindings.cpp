#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sympconn/chart_file.hpp"
#include "sympconn/cli.hpp"
#include "sympconn/curvature.hpp"
#include "sympconn/normal.hpp"
#include "sympconn/serialize.hpp"

namespace py = pybind11;
using namespace sympconn;

namespace {

// Every entry point returns JSON text; the Python package decodes it.
std::string dump(const Json& j) { return j.dump(); }

std::vector<Rational> rationals(const std::vector<std::string>& v) {
    std::vector<Rational> out;
    for (const auto& s : v) out.push_back(parse_rational(s));
    return out;
}

std::string check(const std::string& text, std::optional<int> order) {
    const ChartSpec c = build_chart(parse_chart_file(text), order, false);
    Json j;
    const ValidationReport v = validate(c);
    j["validate"] = to_json(v);
    j["identities"] = nullptr;
    j["derivative_identities"] = nullptr;
    bool passed = v.passed();
    if (passed) {
        const CurvatureData cd = curvature(c);
        const ValidationReport ids = identity_report(cd.low, c.omega_inv());
        j["identities"] = to_json(ids);
        passed = ids.passed();
        if (c.order() >= 3) {
            const ValidationReport d = derivative_identity_report(c);
            j["derivative_identities"] = to_json(d);
            passed = passed && d.passed();
        }
    }
    j["passed"] = passed;
    return dump(j);
}

std::string curvature_of(const std::string& text, std::optional<int> order, bool at_base) {
    const ChartFile f = parse_chart_file(text);
    const ChartSpec c = build_chart(f, order);
    const CurvatureData cd = curvature(c);
    return dump(at_base ? to_json(at_origin(cd.low)) : to_json(cd.low, f.coordinates));
}

std::string ricci_of(const std::string& text, std::optional<int> order) {
    const ChartSpec c = build_chart(parse_chart_file(text), order);
    const RicciResult r = ricci(curvature(c), c.omega_inv());
    Json j;
    j["K"] = to_json(at_origin(r.K));
    j["checks"] = to_json(r.checks);
    return dump(j);
}

std::string sectional(const std::string& text, const std::vector<std::string>& x, const std::vector<std::string>& y) {
    const ChartSpec c = build_chart(parse_chart_file(text));
    return dump(to_json(sectional_classify(curvature_at_origin(c), at_origin(c.omega()), rationals(x), rationals(y))));
}

std::string normal_tensors_of(const std::string& text, std::optional<int> rmax, std::optional<int> order) {
    const ChartSpec c = build_chart(parse_chart_file(text), order);
    return dump(to_json(normal_tensors(c, rmax.value_or(c.order() - 1))));
}

std::string realize_of(const std::string& point_text, std::optional<int> order) {
    const PointData d = parse_point_data(point_text);
    return write_chart_file(chart_file_from(realize(d, order), d.coordinates));
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact local computations on Fedosov manifolds";
    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, error_json(e).dump().c_str());
        }
    });
    m.def("check", &check, py::arg("text"), py::arg("order") = py::none());
    m.def("curvature", &curvature_of, py::arg("text"), py::arg("order") = py::none(), py::arg("at_base") = false);
    m.def("ricci", &ricci_of, py::arg("text"), py::arg("order") = py::none());
    m.def("sectional", &sectional, py::arg("text"), py::arg("x"), py::arg("y"));
    m.def("normal_tensors", &normal_tensors_of, py::arg("text"), py::arg("rmax") = py::none(),
          py::arg("order") = py::none());
    m.def("realize", &realize_of, py::arg("point_text"), py::arg("order") = py::none());
    m.def("functional_dims", [](long long n) { return dump(to_json(functional_dims(n))); }, py::arg("n"));
    m.def("run_cli", &run_cli, py::arg("args"));
}
