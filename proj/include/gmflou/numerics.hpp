#pragma once

#include <algorithm>
#include <cmath>

namespace gmflou {

/// x_+^p.
inline double pos_pow(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }

/// (x + delta)^p - x^p for x >= 0 and x + delta >= 0. Stays accurate when
/// |delta| << x, where the naive difference loses most of its digits.
inline double pow_diff(double x, double delta, double p) {
    if (x > 0.0 && std::fabs(delta) < 0.5 * x) return std::pow(x, p) * std::expm1(p * std::log1p(delta / x));
    return pos_pow(x + delta, p) - pos_pow(x, p);
}

inline double beta_function(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace gmflou
