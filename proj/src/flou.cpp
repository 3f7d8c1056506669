#include "gmflou/flou.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "gmflou/errors.hpp"
#include "gmflou/quadrature.hpp"

namespace gmflou {

void MixingParams::validate() const {
    if (!(h > 0.0 && h < 1.0)) throw ParameterError("h must lie in (0, 1)");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be > 0");
}

double LambdaSample::min_abs() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, -v);
    return m;
}

LambdaSample sample_lambda(const MixingParams& mix, std::size_t m, SeedLineage lineage) {
    mix.validate();
    if (m < 1) throw ParameterError("sample_lambda: m must be >= 1");
    LambdaSample out{{}, mix, lineage, 0};
    out.values.reserve(m);
    Sampler sampler(lineage);
    while (out.values.size() < m) {
        const double rate = sampler.gamma(1.0 - mix.h) / mix.alpha;
        if (rate < kLambdaFloor) {
            ++out.resampled;
            continue;
        }
        out.values.push_back(-rate);
    }
    return out;
}

double variance_flou(double lambda, double d, double m2) {
    if (!(lambda < 0.0)) throw DomainError("variance_flou: lambda must be < 0");
    return cd_constant(d, m2) * std::tgamma(2.0 * d) / std::pow(-lambda, 2.0 * d + 1.0);
}

double aggregated_term(double lambda_k, double lambda_j, double d, double m2) {
    if (!(lambda_k < 0.0 && lambda_j < 0.0)) throw DomainError("variance_aggregated: every lambda must be < 0");
    return cd_constant(d, m2) * 2.0 * std::tgamma(2.0 * d) / (-(lambda_k + lambda_j) * std::pow(-lambda_k, 2.0 * d));
}

double variance_aggregated(std::span<const double> lambdas, double d, double m2) {
    if (lambdas.empty()) throw DomainError("variance_aggregated: empty lambda vector");
    for (double l : lambdas) {
        if (!(l < 0.0)) throw DomainError("variance_aggregated: every lambda must be < 0");
    }
    const double p = 2.0 * d;
    double acc = 0.0;
    for (double lk : lambdas) {
        const double w = std::pow(-lk, -p);
        double inner = 0.0;
        for (double lj : lambdas) inner += 1.0 / -(lk + lj);
        acc += w * inner;
    }
    const double m = static_cast<double>(lambdas.size());
    return cd_constant(d, m2) * 2.0 * std::tgamma(p) * acc / (m * m);
}

namespace {

/// int_a^b f on panels of width w, 2w, 4w, ...
double growing_panels(const quad::Integrand& f, double a, double b, double w, const quad::QuadratureControl& ctrl) {
    double total = 0.0;
    while (a < b) {
        const double hi = std::min(a + w, b);
        total += quad::integrate(f, a, hi, ctrl);
        a = hi;
        w *= 2.0;
    }
    return total;
}

}  // namespace

double aggregated_term_quadrature(double lambda_k, double lambda_j, double d, double m2) {
    if (!(lambda_k < 0.0 && lambda_j < 0.0)) throw DomainError("aggregated_term_quadrature: lambdas must be < 0");
    // The integral is symmetric in (lambda_k, lambda_j); the inner variable
    // takes the slower rate so the outer range stays short.
    const double slow = std::max(lambda_k, lambda_j);
    const double fast = std::min(lambda_k, lambda_j);
    const double upper = 40.0 / -slow;
    const double outer_upper = std::min(upper, 40.0 / -fast);
    const double p = 2.0 * d - 1.0;
    quad::QuadratureControl inner_ctrl;
    inner_ctrl.rel_tol = 1e-7;
    quad::QuadratureControl ctrl;
    ctrl.rel_tol = 1e-5;
    // e^{slow u} changes on this scale; the |u - v|^p singularity is handled
    // on one scale length either side of v.
    const double scale = std::min(1.0 / -slow, upper);
    auto inner = [&](double v) {
        auto f = [&](double u) { return std::exp(slow * u); };
        auto g = [&](double u) { return std::exp(slow * u) * std::pow(std::fabs(u - v), p); };
        double s = 0.0;
        const double lo = std::max(0.0, v - scale);
        const double hi = std::min(upper, v + scale);
        if (v > 0.0) s += quad::integrate_right_algebraic(f, lo, v, p, inner_ctrl);
        if (v < upper) s += quad::integrate_left_algebraic(f, v, hi, p, inner_ctrl);
        if (lo > 0.0) s += growing_panels(g, 0.0, lo, scale, inner_ctrl);
        if (hi < upper) s += growing_panels(g, hi, upper, scale, inner_ctrl);
        return std::exp(fast * v) * s;
    };
    // The inner integral behaves like v^{2d} near 0, which the first panel
    // absorbs; beyond it the panels grow geometrically. Past 40 / |fast| the outer
    // weight is below e^{-40}.
    const double knee = std::min(1.0 / -fast, outer_upper);
    double total = quad::integrate_power_substitution(inner, 0.0, knee, 1.0 / (2.0 * d), ctrl);
    total += growing_panels(inner, knee, outer_upper, knee, ctrl);
    return cd_constant(d, m2) * total;
}

double mixture_kernel(std::span<const double> lambdas, double s) {
    if (lambdas.empty()) throw ParameterError("mixture_kernel: empty lambda vector");
    double acc = 0.0;
    for (double l : lambdas) acc += std::exp(l * s);
    return acc / static_cast<double>(lambdas.size());
}

double mixture_kernel_limit(const MixingParams& mix, double s) {
    return std::pow(mix.alpha / (mix.alpha + s), 1.0 - mix.h);
}

double default_warmup(double lambda) { return std::max(20.0, 12.0 / std::fabs(lambda)); }

WarmupChoice aggregated_warmup(std::span<const double> lambdas, double cap) {
    double slowest = std::numeric_limits<double>::infinity();
    for (double l : lambdas) slowest = std::min(slowest, std::fabs(l));
    const double want = default_warmup(slowest);
    return {std::min(want, cap), want > cap};
}

std::vector<double> grid_times(const SampleGrid& grid) {
    std::vector<double> t(grid.points());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = grid.time(k);
    return t;
}

PathEnsemble simulate_moving_average(const FlpParams& params, const MovingAverageKernel& kernel,
                                     const EnsembleSetup& setup, std::string process, nlohmann::json description) {
    params.validate();
    auto lattice = std::make_shared<const Lattice>(Lattice::build(setup.grid, setup.scheme, params.d));
    FlpOperator op(lattice, params.d);
    const auto times = grid_times(setup.grid);
    const LinearFunctional fn[1] = {compile_moving_average(op, kernel, process, times)};
    auto ens = simulate_coupled(*lattice, params.spec, fn, setup.root_seed, setup.replicas, setup.threads);
    ens[0].params = std::move(description);
    return std::move(ens[0]);
}

PathEnsemble simulate_flou_fixed(double lambda, const FlpParams& params, const EnsembleSetup& setup,
                                 std::optional<double> warmup) {
    if (!(lambda < 0.0)) throw ParameterError("lambda must be < 0 (stationary solution)");
    const double window = warmup.value_or(default_warmup(lambda));
    ExponentialKernel kernel(lambda, window);
    nlohmann::json desc = {{"lambda", lambda}, {"d", params.d}, {"warmup", window}};
    return simulate_moving_average(params, kernel, setup, "flou", std::move(desc));
}

AggregatedRun simulate_aggregated(const MixingParams& mix, std::size_t m, const FlpParams& params,
                                  const EnsembleSetup& setup, std::optional<double> warmup) {
    auto lambdas = sample_lambda(mix, m, SeedLineage{setup.root_seed, kModelStream});
    WarmupChoice choice = warmup ? WarmupChoice{*warmup, false} : aggregated_warmup(lambdas.values);
    MixtureKernel kernel(lambdas.values, choice.window);
    nlohmann::json desc = {{"h", mix.h},          {"alpha", mix.alpha},         {"m", m},
                           {"d", params.d},        {"warmup", choice.window},    {"warmup_capped", choice.capped},
                           {"lambda_resampled", lambdas.resampled}};
    auto ens = simulate_moving_average(params, kernel, setup, "aggregated", std::move(desc));
    return {std::move(ens), std::move(lambdas), choice};
}

}  // namespace gmflou
