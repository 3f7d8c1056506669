#pragma once

#include <functional>
#include <optional>

namespace gmflou::quad {

struct QuadratureControl {
    double rel_tol = 1e-8;
    unsigned max_depth = 15;
    /// Half-infinite integrals are evaluated out to this point; any power-law
    /// remainder beyond it is added analytically when its exponent is known.
    double horizon = 1e14;
};

using Integrand = std::function<double(double)>;

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Throws NumericError when the
/// error estimate cannot be brought under the requested tolerance.
double integrate(const Integrand& f, double a, double b, const QuadratureControl& ctrl = {});

/// int_a^b f(x) (x - a)^p dx for p > -1. The substitution x = a + z^{1/(p+1)}
/// turns the weight into a constant, so f only needs to be smooth.
double integrate_left_algebraic(const Integrand& f, double a, double b, double p, const QuadratureControl& ctrl = {});

/// int_a^b f(x) (b - x)^p dx for p > -1.
double integrate_right_algebraic(const Integrand& f, double a, double b, double p,
                                 const QuadratureControl& ctrl = {});

/// int_a^b f(x) dx through x = a + s^k (k >= 1). Smooths integrands that behave
/// like (x - a)^{m/k} times a smooth function near a.
double integrate_power_substitution(const Integrand& f, double a, double b, double k,
                                    const QuadratureControl& ctrl = {});

/// int_a^inf f(x) dx on geometrically growing panels [a + s(2^k - 1), a + s(2^{k+1} - 1)]
/// up to ctrl.horizon. If f(x) ~ C x^tail_exponent (tail_exponent < -1) the
/// remainder beyond the horizon is added in closed form.
double integrate_half_line(const Integrand& f, double a, double scale, const QuadratureControl& ctrl = {},
                           std::optional<double> tail_exponent = std::nullopt);

}  // namespace gmflou::quad
