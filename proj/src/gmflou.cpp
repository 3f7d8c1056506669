#include "gmflou/gmflou.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "gmflou/errors.hpp"
#include "gmflou/numerics.hpp"

namespace gmflou {

namespace {

using quad::QuadratureControl;

/// int_a^b f on panels [a + s(2^k - 1), a + s(2^{k+1} - 1)] clipped at b.
double geometric_panels(const quad::Integrand& f, double a, double b, double scale, const QuadratureControl& ctrl) {
    double total = 0.0;
    double lo = a;
    double width = scale;
    while (lo < b) {
        const double hi = std::min(b, lo + width);
        total += quad::integrate(f, lo, hi, ctrl);
        lo = hi;
        width *= 2.0;
    }
    return total;
}

/// int_0^c g(y) (c - y)^p dy for p > -1.
double singular_convolution(double c, double p, const GmflouParams& prm, const QuadratureControl& ctrl) {
    if (c <= 0.0) return 0.0;
    const double half = 0.5 * c;
    auto smooth = [&](double y) { return kernel_g(prm.alpha, prm.h, y) * std::pow(c - y, p); };
    auto near = [&](double w) { return kernel_g(prm.alpha, prm.h, c - w); };
    return geometric_panels(smooth, 0.0, half, std::min(prm.alpha, half), ctrl) +
           quad::integrate_left_algebraic(near, 0.0, half, p, ctrl);
}

/// int_c^inf g(x) (x - c)^p dx for p > -1, c >= 0.
double singular_tail(double c, double p, const GmflouParams& prm, const QuadratureControl& ctrl) {
    const double span = c + prm.alpha;
    auto shifted = [&](double z) { return kernel_g(prm.alpha, prm.h, c + z); };
    auto far = [&](double z) { return kernel_g(prm.alpha, prm.h, c + z) * std::pow(z, p); };
    return quad::integrate_left_algebraic(shifted, 0.0, span, p, ctrl) +
           quad::integrate_half_line(far, span, span, ctrl, prm.h - 1.0 + p);
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::size_t grid_index(const SampleGrid& grid, double t) {
    const double k = std::round(t * grid.n);
    if (std::fabs(k - t * grid.n) > 1e-9 || k < 0 || static_cast<std::size_t>(k) >= grid.points()) {
        throw RangeError("time " + std::to_string(t) + " is not a point of the simulation grid");
    }
    return static_cast<std::size_t>(k);
}

struct Residuals {
    std::vector<LinearFunctional> functionals;
    std::shared_ptr<const Lattice> lattice;
};

ConvergenceTable run_residuals(const Residuals& res, const std::string& axis, std::vector<double> axis_values,
                               const GmflouParams& params, const EnsembleSetup& setup, nlohmann::json desc) {
    auto ens = simulate_coupled(*res.lattice, params.spec, res.functionals, setup.root_seed, setup.replicas,
                                setup.threads);
    ConvergenceTable table;
    table.axis = axis;
    table.axis_values = std::move(axis_values);
    table.params = std::move(desc);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const auto est = mean_square(ens[i].column(0));
        table.residuals.push_back(est.value);
        table.std_errors.push_back(est.std_error);
        const auto w = res.functionals[i].row(0);
        table.scheme_residuals.push_back(scheme_covariance(w, w, res.lattice->widths(), params.spec.m2()));
    }
    return table;
}

}  // namespace

void GmflouParams::validate() const {
    validate_memory_parameter(d);
    if (!(h > 0.0 && h < 1.0)) throw ParameterError("h must lie in (0, 1)");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be > 0");
    if (!(h + d < 0.5)) throw ParameterError("h + d must be < 1/2");
}

double kernel_g(double alpha, double h, double t) { return std::pow(alpha / (alpha + t), 1.0 - h); }

double variance_Z(double alpha, double h, double d, double m2) {
    if (!(h + d < 0.5)) throw DomainError("variance_Z: h + d must be < 1/2");
    return 2.0 * cd_constant(d, m2) * std::pow(alpha, 2.0 * d + 1.0) * beta_function(1.0 - h - 2.0 * d, 2.0 * d) /
           (1.0 - 2.0 * (h + d));
}

double variance_Z_quadrature(double alpha, double h, double d, double m2, const QuadratureControl& ctrl) {
    const GmflouParams prm{d, h, alpha, LevySpec::compensated_gamma(1.0, 1.0)};
    prm.validate();
    const double p = 2.0 * d - 1.0;
    auto outer = [&](double u) { return kernel_g(alpha, h, u) * singular_convolution(u, p, prm, ctrl); };
    // The integrand behaves like u^{2d} at the origin.
    auto scaled = [&](double u) { return u > 0.0 ? outer(u) / std::pow(u, 2.0 * d) : 1.0 / (2.0 * d); };
    const double integral = quad::integrate_left_algebraic(scaled, 0.0, alpha, 2.0 * d, ctrl) +
                            quad::integrate_half_line(outer, alpha, alpha, ctrl, 2.0 * h + 2.0 * d - 2.0);
    return 2.0 * cd_constant(d, m2) * integral;
}

double covariance_Z(double t, const GmflouParams& params, const QuadratureControl& ctrl) {
    params.validate();
    if (!(t > 0.0)) throw DomainError("covariance_Z: t must be > 0");
    const double p = 2.0 * params.d - 1.0;
    auto outer = [&](double y) {
        const double c = t + y;
        return kernel_g(params.alpha, params.h, y) *
               (singular_convolution(c, p, params, ctrl) + singular_tail(c, p, params, ctrl));
    };
    const double integral =
        quad::integrate_half_line(outer, 0.0, params.alpha, ctrl, tail_exponent(params.h, params.d) - 1.0);
    return cd_constant(params.d, params.spec.m2()) * integral;
}

double tail_exponent(double h, double d) { return 2.0 * h + 2.0 * d - 1.0; }

double transferred_kernel(double x, const GmflouParams& params, CfNormalization norm) {
    if (x <= 0.0) return 0.0;
    QuadratureControl ctrl;
    ctrl.rel_tol = 1e-9;
    const double c = norm == CfNormalization::InverseGamma ? 1.0 / std::tgamma(params.d) : params.d;
    return c * singular_convolution(x, params.d - 1.0, params, ctrl);
}

std::complex<double> char_function_Z(std::span<const double> thetas, std::span<const double> times,
                                     const GmflouParams& params, CfNormalization norm, const QuadratureControl& ctrl) {
    params.validate();
    if (thetas.size() != times.size()) throw ParameterError("char_function_Z: one theta per time is required");
    if (std::all_of(thetas.begin(), thetas.end(), [](double v) { return v == 0.0; })) return {1.0, 0.0};
    const double t_max = *std::max_element(times.begin(), times.end());
    std::vector<double> offsets;
    for (double t : times) offsets.push_back(t_max - t);
    offsets = sorted_unique(offsets);

    QuadratureControl local = ctrl;
    local.rel_tol = std::max(ctrl.rel_tol, 1e-8);
    auto argument = [&](double x) {
        double u = 0.0;
        for (std::size_t j = 0; j < times.size(); ++j) u += thetas[j] * transferred_kernel(x - (t_max - times[j]), params, norm);
        return u;
    };
    auto part = [&](bool imag) {
        auto f = [&](double x) {
            const auto psi = cumulant_psi(params.spec, argument(x));
            return imag ? psi.imag() : psi.real();
        };
        // Each kernel switches on like (x - offset)^d; x = offset + s^{1/d} removes the kink.
        const double k = 1.0 / params.d;
        const double first = std::max(1.0, params.alpha);
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
            total += quad::integrate_power_substitution(f, offsets[i], offsets[i + 1], k, local);
        }
        const double lo = offsets.back();
        total += quad::integrate_power_substitution(f, lo, lo + first, k, local);
        // psi(u) ~ -m2 u^2 / 2 (real part) and O(u^3) (imaginary part) far out.
        const double decay = tail_exponent(params.h, params.d) - 1.0;
        const double tail_exp = imag ? 1.5 * decay : decay;
        return total + quad::integrate_half_line(f, lo + first, first, local, tail_exp);
    };
    return std::exp(std::complex<double>(part(false), part(true)));
}

std::complex<double> scheme_char_function(std::span<const double> weights, std::span<const double> widths,
                                          const LevySpec& spec) {
    if (weights.size() != widths.size()) throw ParameterError("scheme_char_function: size mismatch");
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] != 0.0) acc += widths[j] * cumulant_psi(spec, weights[j]);
    }
    return std::exp(acc);
}

PathEnsemble simulate_Z(const GmflouParams& params, const EnsembleSetup& setup) {
    params.validate();
    GammaMixedKernel kernel(params.alpha, params.h);
    nlohmann::json desc = {{"d", params.d}, {"h", params.h}, {"alpha", params.alpha}};
    return simulate_moving_average(params.flp(), kernel, setup, "Z", std::move(desc));
}

PathEnsemble simulate_Y(const GmflouParams& params, const EnsembleSetup& setup) {
    params.validate();
    YKernel kernel(params.h);
    nlohmann::json desc = {{"d", params.d}, {"h", params.h}};
    return simulate_moving_average(params.flp(), kernel, setup, "Y", std::move(desc));
}

ConvergenceTable limit_residual_alpha_inf(std::span<const double> alphas, double t, const GmflouParams& params,
                                          const EnsembleSetup& setup) {
    params.validate();
    grid_index(setup.grid, t);
    Residuals res;
    res.lattice = std::make_shared<const Lattice>(Lattice::build(setup.grid, setup.scheme, params.d));
    FlpOperator op(res.lattice, params.d);
    IndicatorKernel indicator;
    for (double alpha : alphas) {
        GmflouParams p = params;
        p.alpha = alpha;
        p.validate();
        GammaMixedKernel z(alpha, params.h);
        const KernelTerm terms[] = {{&z, t, 1.0}, {&z, 0.0, -1.0}, {&indicator, t, -1.0}};
        res.functionals.push_back(compile_combination(op, terms, "alpha_inf", t));
    }
    nlohmann::json desc = {{"t", t}, {"d", params.d}, {"h", params.h}, {"n", setup.grid.n}, {"replicas", setup.replicas}};
    return run_residuals(res, "alpha_up", {alphas.begin(), alphas.end()}, params, setup, std::move(desc));
}

ConvergenceTable limit_residual_alpha_zero(std::span<const double> alphas, double t, const GmflouParams& params,
                                           const EnsembleSetup& setup) {
    params.validate();
    const std::size_t k_end = grid_index(setup.grid, t);
    const double step = 1.0 / setup.grid.n;
    const auto trap = trapezoid_weights(k_end, step);
    Residuals res;
    res.lattice = std::make_shared<const Lattice>(Lattice::build(setup.grid, setup.scheme, params.d));
    FlpOperator op(res.lattice, params.d);
    YKernel y(params.h);
    for (double alpha : alphas) {
        GmflouParams p = params;
        p.alpha = alpha;
        p.validate();
        GammaMixedKernel z(alpha, params.h);
        const double scale = std::pow(alpha, params.h - 1.0);
        if (!std::isfinite(scale)) throw NumericError("alpha^{h-1} overflows for alpha = " + std::to_string(alpha));
        std::vector<KernelTerm> terms;
        for (std::size_t k = 0; k <= k_end && t > 0.0; ++k) terms.push_back({&z, setup.grid.time(k), scale * trap[k]});
        terms.push_back({&y, t, -1.0});
        res.functionals.push_back(compile_combination(op, terms, "alpha_zero", t));
    }
    nlohmann::json desc = {{"t", t}, {"d", params.d}, {"h", params.h}, {"n", setup.grid.n}, {"replicas", setup.replicas}};
    return run_residuals(res, "alpha_down", {alphas.begin(), alphas.end()}, params, setup, std::move(desc));
}

ConvergenceTable aggregation_residual(std::span<const std::size_t> ms, double t, const GmflouParams& params,
                                      const EnsembleSetup& setup) {
    params.validate();
    grid_index(setup.grid, t);
    if (ms.empty()) throw ParameterError("aggregation_residual: empty m axis");
    const std::size_t m_max = *std::max_element(ms.begin(), ms.end());
    const auto lambdas = sample_lambda(params.mixing(), m_max, SeedLineage{setup.root_seed, kModelStream});
    Residuals res;
    res.lattice = std::make_shared<const Lattice>(Lattice::build(setup.grid, setup.scheme, params.d));
    FlpOperator op(res.lattice, params.d);
    GammaMixedKernel z(params.alpha, params.h);
    std::vector<double> axis;
    bool capped = false;
    for (std::size_t m : ms) {
        const std::span<const double> prefix(lambdas.values.data(), m);
        const auto warm = aggregated_warmup(prefix);
        capped = capped || warm.capped;
        MixtureKernel zm({prefix.begin(), prefix.end()}, warm.window);
        const KernelTerm terms[] = {{&zm, t, 1.0}, {&z, t, -1.0}};
        res.functionals.push_back(compile_combination(op, terms, "aggregation", t));
        axis.push_back(static_cast<double>(m));
    }
    nlohmann::json desc = {{"t", t},           {"d", params.d},        {"h", params.h},
                           {"alpha", params.alpha}, {"n", setup.grid.n}, {"replicas", setup.replicas},
                           {"lambda_resampled", lambdas.resampled}, {"warmup_capped", capped}};
    return run_residuals(res, "m", std::move(axis), params, setup, std::move(desc));
}

}  // namespace gmflou
