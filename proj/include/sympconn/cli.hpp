#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sympconn {

/// Runs one command line (without the program name). Reports go to `out` as
/// JSON, errors to `err` as {"error": {...}}. Returns 0 on success, 1 when a
/// check or a named condition fails, 2 on input errors.
///
///   check FILE
///   curvature FILE [--at-base]
///   ricci FILE [--at-base]
///   sectional FILE --x a,b,.. --y c,d,..
///   normal-tensors FILE [--rmax R]
///   realize POINTFILE
///   dims N
///   selftest [--charts M]
///
/// Global flags: --order K overrides the order in the file, --seed S seeds selftest.
/// FILE may be "-" for standard input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sympconn
