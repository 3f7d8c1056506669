#include "gmflou/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gmflou/errors.hpp"

namespace gmflou::quad {

double integrate(const Integrand& f, double a, double b, const QuadratureControl& ctrl) {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    // Work on [0, 1]: the error estimate is unreliable on very short or very long intervals.
    const double len = b - a;
    auto unit = [&](double s) { return f(a + len * s); };
    const double value = len * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                                   unit, 0.0, 1.0, ctrl.max_depth, ctrl.rel_tol, &error, &l1);
    error *= std::fabs(len);
    l1 *= std::fabs(len);
    if (!std::isfinite(value) || error > 1e3 * ctrl.rel_tol * l1 + 1e-300) {
        std::ostringstream os;
        os.precision(6);
        os << "quadrature did not converge on [" << a << ", " << b << "]: value=" << value << " error=" << error
           << " L1=" << l1 << " rel_tol=" << ctrl.rel_tol;
        throw NumericError(os.str());
    }
    return value;
}

double integrate_left_algebraic(const Integrand& f, double a, double b, double p, const QuadratureControl& ctrl) {
    if (!(p > -1.0)) throw DomainError("integrate_left_algebraic: exponent must exceed -1");
    if (b <= a) return 0.0;
    const double q = 1.0 / (p + 1.0);
    const double upper = std::pow(b - a, p + 1.0);
    return q * integrate([&](double z) { return f(a + std::pow(z, q)); }, 0.0, upper, ctrl);
}

double integrate_right_algebraic(const Integrand& f, double a, double b, double p, const QuadratureControl& ctrl) {
    if (!(p > -1.0)) throw DomainError("integrate_right_algebraic: exponent must exceed -1");
    if (b <= a) return 0.0;
    const double q = 1.0 / (p + 1.0);
    const double upper = std::pow(b - a, p + 1.0);
    return q * integrate([&](double z) { return f(b - std::pow(z, q)); }, 0.0, upper, ctrl);
}

double integrate_power_substitution(const Integrand& f, double a, double b, double k, const QuadratureControl& ctrl) {
    if (!(k >= 1.0)) throw DomainError("integrate_power_substitution: k must be >= 1");
    if (b <= a) return 0.0;
    const double upper = std::pow(b - a, 1.0 / k);
    return integrate([&](double z) { return z > 0.0 ? f(a + std::pow(z, k)) * k * std::pow(z, k - 1.0) : 0.0; }, 0.0,
                     upper, ctrl);
}

double integrate_half_line(const Integrand& f, double a, double scale, const QuadratureControl& ctrl,
                           std::optional<double> tail_exponent) {
    if (!(scale > 0.0)) throw DomainError("integrate_half_line: scale must be positive");
    double total = 0.0;
    double lo = a;
    double width = scale;
    while (lo < ctrl.horizon) {
        const double hi = std::min(lo + width, ctrl.horizon);
        total += integrate(f, lo, hi, ctrl);
        lo = hi;
        width *= 2.0;
    }
    if (tail_exponent) {
        if (!(*tail_exponent < -1.0)) throw DomainError("integrate_half_line: tail exponent must be < -1");
        total += -f(lo) * lo / (*tail_exponent + 1.0);
    }
    return total;
}

}  // namespace gmflou::quad
