#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sympconn/jet.hpp"

namespace sympconn {

/// Parsed arithmetic expression over rational literals and coordinate names:
/// integers, names, + - * / ( ) and ^ with a non-negative integer exponent.
/// Unary minus binds looser than ^, so -x^2 is -(x^2).
class Expression {
public:
    /// Throws ParseError with the 1-based column of the offending character.
    /// `field` names the input location and is copied into errors.
    static Expression parse(std::string_view text, const std::vector<std::string>& names, std::string field = {});

    /// Taylor expansion at `base` to `order`, in the displacement variables
    /// x - base. Throws SingularityError when a denominator vanishes at `base`.
    Jet to_jet(std::span<const Rational> base, int order) const;

    double evaluate(std::span<const double> point) const;

    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    Expression(std::string text, std::string field, std::shared_ptr<const Node> root);

    std::string text_;
    std::string field_;
    std::shared_ptr<const Node> root_;
};

}  // namespace sympconn
