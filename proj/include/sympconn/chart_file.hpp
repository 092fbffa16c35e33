#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sympconn/chart.hpp"
#include "sympconn/report.hpp"
#include "sympconn/tensor.hpp"

namespace sympconn {

enum class ConnectionKind { flat, explicit_gamma, levi_civita, from_symmetric };

/// Text form of a chart. Expressions are kept as strings until build_chart.
///
///   {"dimension": 2, "order": 3, "coordinates": ["x", "y"], "base_point": ["0", "1"],
///    "omega": [["0", "1/y^2"], [null, "0"]],
///    "connection": {"kind": "levi_civita", "metric": [["1/y^2", "0"], ["0", "1/y^2"]]}}
///
/// omega entries may be null and are filled in from the transposed entry
/// (zero on the diagonal); a null omega is the canonical block form.
/// gamma_lower and pi_lower are n x n x n arrays, metric is n x n.
struct ChartFile {
    int dimension = 0;
    int order = 0;
    std::vector<std::string> coordinates;
    std::vector<Rational> base_point;
    std::optional<std::vector<std::vector<std::optional<std::string>>>> omega;
    ConnectionKind kind = ConnectionKind::flat;
    /// Flattened row-major entries of gamma_lower, metric or pi_lower.
    std::vector<std::string> entries;
};

std::string to_string(ConnectionKind k);

/// A chart that parsed but failed validate().
class InvalidChartError : public Error {
public:
    InvalidChartError(const std::string& what, ValidationReport report) : Error(what), report_(std::move(report)) {}
    const ValidationReport& report() const noexcept { return report_; }
    const char* kind() const noexcept override { return "invalid_chart"; }

private:
    ValidationReport report_;
};

/// Parses chart JSON. Unknown fields, wrong shapes and malformed expressions
/// raise ParseError; JSON syntax errors carry the line and column in the text.
ChartFile parse_chart_file(std::string_view text);

/// Expands every expression at the base point and assembles the chart; the
/// order is taken from the file unless `order` is given. With `require_valid`
/// a chart failing validate() raises InvalidChartError carrying the report.
ChartSpec build_chart(const ChartFile& file, std::optional<int> order = std::nullopt, bool require_valid = true);

/// parse_chart_file followed by build_chart.
ChartSpec parse_chart(std::string_view text, std::optional<int> order = std::nullopt);

/// Chart file with explicit polynomial gamma_lower and omega, base point at the
/// origin. Names default to x1..xn.
ChartFile chart_file_from(const ChartSpec& c, std::vector<std::string> names = {});

/// Deterministic JSON text of a chart file.
std::string write_chart_file(const ChartFile& file);

/// Prescribed data at a point for the realization commands:
///   {"omega0": n x n rationals, "R0": optional rank-4 array, "R1": optional rank-5 array,
///    "order": optional, "coordinates": optional}
/// Rationals are strings "p/q" or JSON integers.
struct PointData {
    PointTensor omega0{2, down(2), Rational(0)};
    std::optional<PointTensor> r0;
    std::optional<PointTensor> r1;
    std::optional<int> order;
    std::vector<std::string> coordinates;
};

PointData parse_point_data(std::string_view text);

/// realize_curvature_derivative when R1 is present, else realize_curvature.
/// The order is `order`, else the file's, else the minimum (3 or 4).
ChartSpec realize(const PointData& data, std::optional<int> order = std::nullopt);

}  // namespace sympconn
