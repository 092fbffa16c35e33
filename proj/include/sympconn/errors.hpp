#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sympconn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

/// Operands with incompatible variable counts, orders, slot layouts or variances.
class ShapeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "shape"; }
};

/// A value that has to be inverted is not invertible at the origin.
class SingularityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "singularity"; }
};

class PreconditionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "precondition"; }
};

/// Not enough Taylor coefficients are available for the requested quantity.
class OrderError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "order"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Location of a failed exact check: an index tuple and, for jet-valued
/// quantities, the first multidegree at which the identity fails.
struct Witness {
    std::vector<int> indices;
    std::vector<int> multidegree;

    std::string to_string() const;
};

/// A named algebraic condition does not hold. Carries the condition name and
/// the first location where it fails.
class ConditionError : public Error {
public:
    ConditionError(std::string condition, Witness witness, const std::string& detail = {});

    const std::string& condition() const noexcept { return condition_; }
    const Witness& witness() const noexcept { return witness_; }
    const char* kind() const noexcept override { return "condition"; }

private:
    std::string condition_;
    Witness witness_;
};

/// A declared tensor symmetry is violated by the entries.
class SymmetryError : public ConditionError {
public:
    using ConditionError::ConditionError;
    const char* kind() const noexcept override { return "symmetry"; }
};

/// Cross-derivative compatibility fails, so no potential exists.
class IntegrabilityError : public ConditionError {
public:
    using ConditionError::ConditionError;
    const char* kind() const noexcept override { return "integrability"; }
};

/// Input data for a realization fails one or more admissibility conditions.
/// condition() is the first failure in checking order; failed() lists all.
class AdmissibilityError : public ConditionError {
public:
    AdmissibilityError(std::vector<std::string> failed, Witness witness, const std::string& detail = {});

    const std::vector<std::string>& failed() const noexcept { return failed_; }
    const char* kind() const noexcept override { return "admissibility"; }

private:
    std::vector<std::string> failed_;
};

/// Malformed chart or expression text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column, std::string field = {});

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& field() const noexcept { return field_; }
    const char* kind() const noexcept override { return "syntax"; }

private:
    int line_;
    int column_;
    std::string field_;
};

}  // namespace sympconn
