#include "sympconn/errors.hpp"

#include <sstream>

namespace sympconn {

namespace {

std::string join(const std::vector<int>& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    os << ')';
    return os.str();
}

std::string join_names(const std::vector<std::string>& names, std::size_t from) {
    std::string out;
    for (std::size_t i = from; i < names.size(); ++i) {
        if (i > from) out += ", ";
        out += names[i];
    }
    return out;
}

}  // namespace

std::string Witness::to_string() const {
    std::string s = "indices " + join(indices);
    if (!multidegree.empty()) s += " multidegree " + join(multidegree);
    return s;
}

ConditionError::ConditionError(std::string condition, Witness witness, const std::string& detail)
    : Error(condition + " violated at " + witness.to_string() + (detail.empty() ? "" : ": " + detail)),
      condition_(std::move(condition)),
      witness_(std::move(witness)) {}

AdmissibilityError::AdmissibilityError(std::vector<std::string> failed, Witness witness, const std::string& detail)
    : ConditionError(failed.empty() ? std::string("admissibility") : failed.front(), std::move(witness),
                     detail + (failed.size() > 1 ? " (also failing: " + join_names(failed, 1) + ")" : "")),
      failed_(std::move(failed)) {}

ParseError::ParseError(const std::string& message, int line, int column, std::string field)
    : Error(message), line_(line), column_(column), field_(std::move(field)) {}

}  // namespace sympconn
