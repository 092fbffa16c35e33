#include "sympconn/chart_file.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sympconn/expression.hpp"
#include "sympconn/reconstruct.hpp"
#include "sympconn/serialize.hpp"

namespace sympconn {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) { throw ParseError(msg, 0, 0, field); }

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        int line = 1, column = 1;
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') ++line, column = 1;
            else ++column;
        }
        throw ParseError(std::string("JSON syntax error: ") + e.what(), line, column);
    }
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown field '" + key + "'");
}

const Json& required(const Json& obj, const std::string& key, const std::string& where = {}) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where.empty() ? key : where + "." + key, "missing field '" + key + "'");
    return *it;
}

int int_field(const Json& j, const std::string& field, int min) {
    if (!j.is_number_integer()) fail(field, field + " must be an integer");
    const long long v = j.get<long long>();
    if (v < min || v > 64) fail(field, field + " is out of range");
    return static_cast<int>(v);
}

std::string expression_text(const Json& j, const std::string& field) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    fail(field, field + " must be an expression string");
}

std::string index_suffix(const std::vector<int>& idx) {
    std::string s;
    for (int i : idx) s += "[" + std::to_string(i) + "]";
    return s;
}

// Row-major expression strings of a nested n^rank array.
void collect(const Json& j, int n, int rank, const std::string& field, std::vector<std::string>& out) {
    if (rank == 0) {
        out.push_back(expression_text(j, field));
        return;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != n) fail(field, field + " must be an array of length " + std::to_string(n));
    for (int i = 0; i < n; ++i) collect(j[i], n, rank - 1, field + "[" + std::to_string(i) + "]", out);
}

ConnectionKind kind_from(const std::string& s, const std::string& field) {
    if (s == "flat") return ConnectionKind::flat;
    if (s == "explicit") return ConnectionKind::explicit_gamma;
    if (s == "levi_civita") return ConnectionKind::levi_civita;
    if (s == "from_symmetric") return ConnectionKind::from_symmetric;
    fail(field, "unknown connection kind '" + s + "'");
}

const char* entries_key(ConnectionKind k) {
    switch (k) {
        case ConnectionKind::explicit_gamma: return "gamma_lower";
        case ConnectionKind::levi_civita: return "metric";
        case ConnectionKind::from_symmetric: return "pi_lower";
        case ConnectionKind::flat: break;
    }
    return "";
}

int entries_rank(ConnectionKind k) { return k == ConnectionKind::levi_civita ? 2 : 3; }

JetTensor expand(const std::vector<std::string>& texts, const ChartFile& f, int rank, int order, const std::string& key) {
    const int n = f.dimension;
    std::size_t pos = 0;
    return JetTensor::generate(n, down(rank), [&](const MultiIndex& I) {
        const std::string field = "connection." + key + index_suffix(I);
        return Expression::parse(texts[pos++], f.coordinates, field).to_jet(f.base_point, order);
    });
}

std::vector<std::string> default_names(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

// Maps a column inside an expression to the line and column of the file when
// the expression's string literal occurs exactly once in the text.
ParseError locate(const ParseError& e, const std::string& expr, std::string_view text) {
    const std::string literal = Json(expr).dump();
    const auto first = text.find(literal);
    if (first == std::string_view::npos || text.find(literal, first + 1) != std::string_view::npos) return e;
    const std::size_t offset = first + 1 + static_cast<std::size_t>(std::max(e.column(), 1) - 1);
    int line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line, column = 1;
        else ++column;
    }
    return ParseError(e.what(), line, column, e.field());
}

void check_expression(const std::string& expr, const ChartFile& f, const std::string& field, std::string_view text) {
    try {
        Expression::parse(expr, f.coordinates, field);
    } catch (const ParseError& e) {
        throw locate(e, expr, text);
    }
}

// Parses every expression once so syntax errors surface before any expansion.
void check_expressions(const ChartFile& f, std::string_view text) {
    const int n = f.dimension;
    if (f.omega)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if ((*f.omega)[i][j]) check_expression(*(*f.omega)[i][j], f, "omega" + index_suffix({i, j}), text);
    if (!f.entries.empty()) {
        std::size_t pos = 0;
        for_each_index(entries_rank(f.kind), n, [&](const MultiIndex& I) {
            check_expression(f.entries[pos++], f, "connection." + std::string(entries_key(f.kind)) + index_suffix(I), text);
        });
    }
}

}  // namespace

std::string to_string(ConnectionKind k) {
    switch (k) {
        case ConnectionKind::flat: return "flat";
        case ConnectionKind::explicit_gamma: return "explicit";
        case ConnectionKind::levi_civita: return "levi_civita";
        case ConnectionKind::from_symmetric: return "from_symmetric";
    }
    return "unknown";
}

ChartFile parse_chart_file(std::string_view text) {
    const Json doc = parse_json(text);
    if (!doc.is_object()) fail("", "a chart file must be a JSON object");
    reject_unknown(doc, {"dimension", "order", "coordinates", "base_point", "omega", "connection"}, "");

    ChartFile f;
    f.dimension = int_field(required(doc, "dimension"), "dimension", 1);
    f.order = int_field(required(doc, "order"), "order", 0);
    const int n = f.dimension;

    if (auto it = doc.find("coordinates"); it != doc.end()) {
        if (!it->is_array() || static_cast<int>(it->size()) != n)
            fail("coordinates", "coordinates must list " + std::to_string(n) + " names");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string field = "coordinates[" + std::to_string(i) + "]";
            if (!(*it)[i].is_string()) fail(field, field + " must be a string");
            const std::string name = (*it)[i].get<std::string>();
            if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') ||
                !std::all_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
                fail(field, "coordinate name '" + name + "' is not an identifier");
            if (std::find(f.coordinates.begin(), f.coordinates.end(), name) != f.coordinates.end())
                fail(field, "duplicate coordinate name '" + name + "'");
            f.coordinates.push_back(name);
        }
    } else {
        f.coordinates = default_names(n);
    }

    if (auto it = doc.find("base_point"); it != doc.end()) {
        if (!it->is_array() || static_cast<int>(it->size()) != n)
            fail("base_point", "base_point must have " + std::to_string(n) + " entries");
        for (std::size_t i = 0; i < it->size(); ++i)
            f.base_point.push_back(rational_from_json((*it)[i], "base_point[" + std::to_string(i) + "]"));
    } else {
        f.base_point.assign(static_cast<std::size_t>(n), Rational(0));
    }

    if (auto it = doc.find("omega"); it != doc.end() && !it->is_null()) {
        if (!it->is_array() || static_cast<int>(it->size()) != n) fail("omega", "omega must be an n x n array");
        std::vector<std::vector<std::optional<std::string>>> rows;
        for (int i = 0; i < n; ++i) {
            const Json& row = (*it)[i];
            const std::string rf = "omega[" + std::to_string(i) + "]";
            if (!row.is_array() || static_cast<int>(row.size()) != n) fail(rf, rf + " must have " + std::to_string(n) + " entries");
            std::vector<std::optional<std::string>> r;
            for (int j = 0; j < n; ++j) {
                const std::string ef = rf + "[" + std::to_string(j) + "]";
                if (row[j].is_null()) r.emplace_back();
                else r.emplace_back(expression_text(row[j], ef));
            }
            rows.push_back(std::move(r));
        }
        f.omega = std::move(rows);
    }

    const Json& conn = required(doc, "connection");
    if (!conn.is_object()) fail("connection", "connection must be an object");
    const Json& kind = required(conn, "kind", "connection");
    if (!kind.is_string()) fail("connection.kind", "connection.kind must be a string");
    f.kind = kind_from(kind.get<std::string>(), "connection.kind");
    if (f.kind == ConnectionKind::flat) {
        reject_unknown(conn, {"kind"}, "connection");
    } else {
        const std::string key = entries_key(f.kind);
        reject_unknown(conn, {"kind", key}, "connection");
        collect(required(conn, key, "connection"), n, entries_rank(f.kind), "connection." + key, f.entries);
    }

    check_expressions(f, text);
    return f;
}

ChartSpec build_chart(const ChartFile& f, std::optional<int> order, bool require_valid) {
    const int n = f.dimension;
    const int K = order.value_or(f.order);
    if (K < 2) throw OrderError("chart order must be at least 2");
    if (n % 2 != 0) throw ShapeError("a symplectic chart needs an even dimension");
    if (static_cast<int>(f.coordinates.size()) != n || static_cast<int>(f.base_point.size()) != n)
        throw ShapeError("coordinates and base_point must have one entry per dimension");

    JetTensor omega = zero_jet_tensor(n, down(2), n, K);
    if (!f.omega) {
        omega = to_jets(canonical_omega(n), n, K);
    } else {
        const auto& w = *f.omega;
        auto entry = [&](int i, int j) -> std::optional<Jet> {
            if (!w[i][j]) return std::nullopt;
            return Expression::parse(*w[i][j], f.coordinates, "omega" + index_suffix({i, j})).to_jet(f.base_point, K);
        };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (auto e = entry(i, j)) omega(i, j) = *e;
                else if (auto t = entry(j, i)) omega(i, j) = -*t;
            }
    }

    JetTensor gamma = zero_jet_tensor(n, down(3), n, K - 1);
    Provenance provenance = Provenance::explicit_gamma;
    switch (f.kind) {
        case ConnectionKind::flat: provenance = Provenance::flat; break;
        case ConnectionKind::explicit_gamma: gamma = expand(f.entries, f, 3, K - 1, "gamma_lower"); break;
        case ConnectionKind::levi_civita:
            gamma = levi_civita_gamma(expand(f.entries, f, 2, K, "metric"), omega);
            provenance = Provenance::levi_civita;
            break;
        case ConnectionKind::from_symmetric:
            gamma = preserving_from_symmetric(expand(f.entries, f, 3, K - 1, "pi_lower"), omega);
            break;
    }
    ChartSpec chart(K, std::move(omega), std::move(gamma), provenance);
    if (require_valid) {
        ValidationReport report = validate(chart);
        if (!report.passed()) throw InvalidChartError("chart fails validation: " + report.failures().front(), report);
    }
    return chart;
}

ChartSpec parse_chart(std::string_view text, std::optional<int> order) {
    return build_chart(parse_chart_file(text), order);
}

ChartFile chart_file_from(const ChartSpec& c, std::vector<std::string> names) {
    const int n = c.dim();
    if (names.empty()) names = default_names(n);
    if (static_cast<int>(names.size()) != n) throw ShapeError("one coordinate name per dimension is required");
    ChartFile f;
    f.dimension = n;
    f.order = c.order();
    f.coordinates = names;
    f.base_point.assign(static_cast<std::size_t>(n), Rational(0));
    std::vector<std::vector<std::optional<std::string>>> w(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w[i].emplace_back(c.omega()(i, j).to_string(names));
    f.omega = std::move(w);
    f.kind = ConnectionKind::explicit_gamma;
    for (const auto& e : c.gamma_lower().entries()) f.entries.push_back(e.to_string(names));
    return f;
}

std::string write_chart_file(const ChartFile& f) {
    const int n = f.dimension;
    Json doc;
    doc["dimension"] = n;
    doc["order"] = f.order;
    doc["coordinates"] = f.coordinates;
    Json base = Json::array();
    for (const auto& q : f.base_point) base.push_back(to_json(q));
    doc["base_point"] = std::move(base);
    if (f.omega) {
        Json w = Json::array();
        for (const auto& row : *f.omega) {
            Json r = Json::array();
            for (const auto& e : row) r.push_back(e ? Json(*e) : Json(nullptr));
            w.push_back(std::move(r));
        }
        doc["omega"] = std::move(w);
    } else {
        doc["omega"] = nullptr;
    }
    Json conn;
    conn["kind"] = to_string(f.kind);
    if (f.kind != ConnectionKind::flat) {
        std::size_t pos = 0;
        auto nest = [&](auto&& self, int rank) -> Json {
            if (rank == 0) return Json(f.entries.at(pos++));
            Json arr = Json::array();
            for (int i = 0; i < n; ++i) arr.push_back(self(self, rank - 1));
            return arr;
        };
        conn[entries_key(f.kind)] = nest(nest, entries_rank(f.kind));
    }
    doc["connection"] = std::move(conn);
    return doc.dump(2) + "\n";
}

PointData parse_point_data(std::string_view text) {
    const Json doc = parse_json(text);
    if (!doc.is_object()) fail("", "a point file must be a JSON object");
    reject_unknown(doc, {"omega0", "R0", "R1", "order", "coordinates"}, "");
    PointData d;
    d.omega0 = point_tensor_from_json(required(doc, "omega0"), 2, "omega0");
    const int n = d.omega0.dim();
    if (auto it = doc.find("R0"); it != doc.end() && !it->is_null()) d.r0 = point_tensor_from_json(*it, 4, "R0", n);
    if (auto it = doc.find("R1"); it != doc.end() && !it->is_null()) d.r1 = point_tensor_from_json(*it, 5, "R1", n);
    if (!d.r0 && !d.r1) fail("R0", "at least one of R0 and R1 is required");
    if (auto it = doc.find("order"); it != doc.end()) d.order = int_field(*it, "order", 2);
    if (auto it = doc.find("coordinates"); it != doc.end()) {
        if (!it->is_array() || static_cast<int>(it->size()) != n) fail("coordinates", "coordinates must list n names");
        for (const auto& name : *it) {
            if (!name.is_string()) fail("coordinates", "coordinate names must be strings");
            d.coordinates.push_back(name.get<std::string>());
        }
    }
    return d;
}

ChartSpec realize(const PointData& d, std::optional<int> order) {
    const std::optional<int> k = order ? order : d.order;
    if (d.r1) return realize_curvature_derivative(d.r0, *d.r1, d.omega0, k.value_or(4));
    return realize_curvature(*d.r0, d.omega0, k.value_or(3));
}

}  // namespace sympconn
