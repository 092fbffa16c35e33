#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sympconn/errors.hpp"

namespace sympconn {

struct Check {
    std::string name;
    bool passed = true;
    /// First offending index tuple and multidegree when the check failed.
    std::optional<Witness> witness;
    std::string detail;
};

/// Ordered list of named exact checks.
struct ValidationReport {
    std::vector<Check> checks;

    bool passed() const;
    /// Nullptr when no check has that name.
    const Check* find(const std::string& name) const;

    /// Appends a check that fails iff `failure` holds a witness.
    void add(std::string name, std::optional<Witness> failure, std::string detail = {});
    void add(std::string name, bool passed, std::string detail = {});
    void append(const ValidationReport& other);

    /// Names of the failed checks, in order.
    std::vector<std::string> failures() const;
};

}  // namespace sympconn
