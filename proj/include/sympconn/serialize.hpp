#pragma once

#include <exception>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sympconn/chart.hpp"
#include "sympconn/curvature.hpp"
#include "sympconn/normal.hpp"
#include "sympconn/report.hpp"
#include "sympconn/tensor.hpp"

namespace sympconn {

/// Keys keep insertion order so reports are byte-stable.
using Json = nlohmann::ordered_json;

/// Rationals are written as canonical strings "p/q" ("p" for integers).
Json to_json(const Rational& q);
Json to_json(const Witness& w);
Json to_json(const ValidationReport& r);
/// Nested arrays indexed like the tensor.
Json to_json(const PointTensor& t);
/// Nested arrays of polynomial strings in `names`.
Json to_json(const JetTensor& t, const std::vector<std::string>& names);
Json to_json(const SectionalClass& s);
Json to_json(const FunctionalDims& d);
Json to_json(const NormalFamily& f);

/// Machine-readable description of a failure: kind, message and whatever the
/// error carries (condition, witness, failed conditions, position, report).
Json error_json(const std::exception& e);

/// Accepts a string "p/q" or a JSON integer. `field` names the location in errors.
Rational rational_from_json(const Json& j, const std::string& field);

/// Nested arrays of rationals of the given rank. With dim < 0 the dimension is
/// taken from the outermost array.
PointTensor point_tensor_from_json(const Json& j, int rank, const std::string& field, int dim = -1);

}  // namespace sympconn
