#include "gmflou/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmflou/errors.hpp"
#include "gmflou/numerics.hpp"

namespace gmflou {

GammaMixedKernel::GammaMixedKernel(double alpha, double h) : alpha_(alpha), h_(h) {
    if (!(alpha > 0.0)) throw ParameterError("alpha must be > 0");
    if (!(h > 0.0 && h < 1.0)) throw ParameterError("h must lie in (0, 1)");
    scale_ = std::pow(alpha, 1.0 - h);
}

double GammaMixedKernel::value(double t, double u) const {
    if (u > t) return 0.0;
    return std::pow(alpha_ / (alpha_ + t - u), 1.0 - h_);
}

double GammaMixedKernel::cell_weight(double t, double a, double b, KernelRule rule) const {
    if (rule == KernelRule::LeftPoint) return value(t, a);
    if (a >= t) return 0.0;
    const double top = std::min(b, t);
    // int_a^top alpha^{1-h} (alpha + t - u)^{h-1} du
    const double integral = scale_ * pow_diff(alpha_ + t - top, top - a, h_) / h_;
    return integral / (b - a);
}

ExponentialKernel::ExponentialKernel(double lambda, std::optional<double> window)
    : lambda_(lambda), window_(window.value_or(std::numeric_limits<double>::infinity())) {
    if (!(lambda < 0.0)) throw ParameterError("lambda must be < 0 (stationary solution)");
    if (!(window_ > 0.0)) throw ParameterError("warmup window must be > 0");
}

double ExponentialKernel::value(double t, double u) const {
    if (u > t || u < t - window_) return 0.0;
    return std::exp(lambda_ * (t - u));
}

double ExponentialKernel::cell_weight(double t, double a, double b, KernelRule rule) const {
    if (rule == KernelRule::LeftPoint) return value(t, a);
    const double lo = std::max(a, t - window_);
    const double hi = std::min(b, t);
    if (hi <= lo) return 0.0;
    const double integral = std::exp(lambda_ * (t - hi)) * std::expm1(lambda_ * (hi - lo)) / lambda_;
    return integral / (b - a);
}

MixtureKernel::MixtureKernel(std::vector<double> lambdas, std::optional<double> window) {
    if (lambdas.empty()) throw ParameterError("mixture kernel needs at least one lambda");
    parts_.reserve(lambdas.size());
    for (double l : lambdas) parts_.emplace_back(l, window);
}

double MixtureKernel::value(double t, double u) const {
    double acc = 0.0;
    for (const auto& p : parts_) acc += p.value(t, u);
    return acc / static_cast<double>(parts_.size());
}

double MixtureKernel::cell_weight(double t, double a, double b, KernelRule rule) const {
    double acc = 0.0;
    for (const auto& p : parts_) acc += p.cell_weight(t, a, b, rule);
    return acc / static_cast<double>(parts_.size());
}

YKernel::YKernel(double h) : h_(h) {
    if (!(h > 0.0 && h < 1.0)) throw ParameterError("h must lie in (0, 1)");
}

double YKernel::value(double t, double u) const {
    if (u <= std::min(t, 0.0)) return pow_diff(-u, t, h_) / h_;
    return (pos_pow(t - u, h_) - pos_pow(-u, h_)) / h_;
}

double YKernel::cell_weight(double t, double a, double b, KernelRule rule) const {
    if (rule == KernelRule::LeftPoint) return value(t, a);
    const double p = h_ + 1.0;
    const double norm = h_ * p * (b - a);
    if (b <= std::min(t, 0.0)) return (pow_diff(-a, t, p) - pow_diff(-b, t, p)) / norm;
    const double first = pos_pow(t - a, p) - pos_pow(t - b, p);
    const double second = pos_pow(-a, p) - pos_pow(-b, p);
    return (first - second) / norm;
}

double IndicatorKernel::cell_weight(double t, double a, double b, KernelRule rule) const {
    if (rule == KernelRule::LeftPoint) return value(t, a);
    const double overlap = std::min(b, t) - std::max(a, 0.0);
    return overlap > 0.0 ? overlap / (b - a) : 0.0;
}

}  // namespace gmflou
