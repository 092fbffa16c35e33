#include "sympconn/serialize.hpp"

#include "sympconn/chart_file.hpp"

namespace sympconn {

namespace {

// Nested arrays over row-major entries.
template <class T, class F>
Json nest(const std::vector<T>& entries, int dim, int rank, std::size_t& pos, F&& leaf) {
    if (rank == 0) return leaf(entries[pos++]);
    Json arr = Json::array();
    for (int i = 0; i < dim; ++i) arr.push_back(nest(entries, dim, rank - 1, pos, leaf));
    return arr;
}

void flatten(const Json& j, int dim, int rank, const std::string& field, std::vector<Rational>& out) {
    if (rank == 0) {
        out.push_back(rational_from_json(j, field));
        return;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ParseError(field + " must be an array of length " + std::to_string(dim), 0, 0, field);
    for (int i = 0; i < dim; ++i) flatten(j[i], dim, rank - 1, field + "[" + std::to_string(i) + "]", out);
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Witness& w) {
    Json j;
    j["indices"] = w.indices;
    j["multidegree"] = w.multidegree;
    return j;
}

Json to_json(const ValidationReport& r) {
    Json j;
    j["passed"] = r.passed();
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    return j;
}

Json to_json(const PointTensor& t) {
    std::size_t pos = 0;
    return nest(t.entries(), t.dim(), t.rank(), pos, [](const Rational& q) { return to_json(q); });
}

Json to_json(const JetTensor& t, const std::vector<std::string>& names) {
    std::size_t pos = 0;
    return nest(t.entries(), t.dim(), t.rank(), pos, [&](const Jet& q) { return Json(q.to_string(names)); });
}

Json to_json(const SectionalClass& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["det_invariant"] = to_json(s.det_invariant);
    j["sign"] = s.sign;
    j["r_numeric"] = s.r_numeric ? Json(*s.r_numeric) : Json(nullptr);
    j["form"] = Json::array({Json::array({to_json(s.e11), to_json(s.e12)}), Json::array({to_json(s.e12), to_json(s.e22)})});
    return j;
}

Json to_json(const FunctionalDims& d) {
    Json j;
    j["C"] = d.C;
    j["S"] = d.S;
    j["C_omega"] = d.C_omega;
    j["S_omega"] = d.S_omega;
    j["Lambda3"] = d.Lambda3;
    j["residual"] = d.residual;
    return j;
}

Json to_json(const NormalFamily& f) {
    Json j;
    j["dimension"] = f.dim;
    j["r_max"] = f.r_max;
    Json a = Json::array();
    for (const auto& t : f.A) a.push_back(to_json(t));
    j["A"] = std::move(a);
    Json w = Json::array();
    for (const auto& t : f.omega_ext) w.push_back(to_json(t));
    j["omega_ext"] = std::move(w);
    return j;
}

Json error_json(const std::exception& e) {
    Json j;
    const auto* err = dynamic_cast<const Error*>(&e);
    j["kind"] = err ? err->kind() : "error";
    j["message"] = e.what();
    if (const auto* c = dynamic_cast<const ConditionError*>(&e)) {
        j["condition"] = c->condition();
        j["witness"] = to_json(c->witness());
    }
    if (const auto* a = dynamic_cast<const AdmissibilityError*>(&e)) j["failed"] = a->failed();
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
        j["line"] = p->line();
        j["column"] = p->column();
        if (!p->field().empty()) j["field"] = p->field();
    }
    if (const auto* v = dynamic_cast<const InvalidChartError*>(&e)) j["report"] = to_json(v->report());
    return Json{{"error", j}};
}

Rational rational_from_json(const Json& j, const std::string& field) {
    if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " in " + field, 0, 0, field);
        }
    }
    throw ParseError(field + " must be a rational string or an integer", 0, 0, field);
}

PointTensor point_tensor_from_json(const Json& j, int rank, const std::string& field, int dim) {
    if (dim < 0) {
        if (!j.is_array() || j.empty()) throw ParseError(field + " must be a non-empty array", 0, 0, field);
        dim = static_cast<int>(j.size());
    }
    std::vector<Rational> entries;
    flatten(j, dim, rank, field, entries);
    return PointTensor(dim, down(rank), std::move(entries));
}

}  // namespace sympconn
