#include "fixtures.hpp"

namespace sympconn::testing {

ChartSpec conformal_chart(const Jet& lambda, int order) {
    const Jet zero(2, order);
    JetTensor omega(2, down(2), std::vector<Jet>{zero, lambda, -lambda, zero});
    JetTensor g(2, down(2), std::vector<Jet>{lambda, zero, zero, lambda});
    return ChartSpec(order, omega, levi_civita_gamma(g, omega), Provenance::levi_civita);
}

Jet sphere_factor(const Rational& r, const Rational& a, const Rational& b, int order) {
    const Jet x = Jet::constant(2, order, a) + Jet::variable(2, order, 0);
    const Jet y = Jet::constant(2, order, b) + Jet::variable(2, order, 1);
    const Jet s = Jet::constant(2, order, r * r) + x * x + y * y;
    return Rational(4 * r * r * r * r) * (s * s).reciprocal();
}

Jet hyperbolic_factor(const Rational&, const Rational& b, int order) {
    const Jet y = Jet::constant(2, order, b) + Jet::variable(2, order, 1);
    return (y * y).reciprocal();
}

}  // namespace sympconn::testing
