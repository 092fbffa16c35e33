#include "sympconn/report.hpp"

#include <algorithm>

namespace sympconn {

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void ValidationReport::add(std::string name, std::optional<Witness> failure, std::string detail) {
    const bool ok = !failure.has_value();
    checks.push_back({std::move(name), ok, std::move(failure), std::move(detail)});
}

void ValidationReport::add(std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), passed, std::nullopt, std::move(detail)});
}

void ValidationReport::append(const ValidationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::vector<std::string> ValidationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed) out.push_back(c.name);
    return out;
}

}  // namespace sympconn
