#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace sympconn {

/// Arbitrary precision rational number; every coefficient in the library is one.
using Rational = mpq_class;

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Parses "p", "p/q", "-p/q" or a finite decimal such as "0.25".
/// Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace sympconn
