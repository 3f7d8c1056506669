#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gmflou/flou.hpp"
#include "gmflou/functional.hpp"
#include "gmflou/quadrature.hpp"
#include "gmflou/stats.hpp"

namespace gmflou {

/// Limit process Z^d(t) = int g(t - u) dL^d(u) with g(x) = (alpha / (alpha + x))^{1-h}.
struct GmflouParams {
    double d = 0.2;
    double h = 0.12;
    double alpha = 1.0;
    LevySpec spec = LevySpec::compensated_gamma(1.0, 2.0);

    /// Throws ParameterError naming the violated condition, e.g. "h + d must be < 1/2".
    void validate() const;
    FlpParams flp() const { return {d, spec}; }
    MixingParams mixing() const { return {h, alpha}; }
};

double kernel_g(double alpha, double h, double t);

/// 2 C_d alpha^{2d+1} B(1 - h - 2d, 2d) / (1 - 2(h + d)).
double variance_Z(double alpha, double h, double d, double m2);

/// 2 C_d int_0^inf g(u) int_0^u g(u - w) w^{2d-1} dw du by quadrature.
double variance_Z_quadrature(double alpha, double h, double d, double m2, const quad::QuadratureControl& ctrl = {});

/// Cov(Z(t), Z(0)) = C_d int_0^inf int_0^inf g(x) g(y) |t + y - x|^{2d-1} dx dy by quadrature.
double covariance_Z(double t, const GmflouParams& params, const quad::QuadratureControl& ctrl = {});

/// 2h + 2d - 1.
double tail_exponent(double h, double d);

enum class CfNormalization {
    InverseGamma,  ///< 1/Gamma(d), the Riemann-Liouville normalization
    LiteralD,  ///< the literal prefactor d
};

/// Kernel of Z(t) against the driving Lévy noise, as a function of x = t - s:
/// c int_0^x g(x - w) w^{d-1} dw with c = 1/Gamma(d) (or d).
double transferred_kernel(double x, const GmflouParams& params, CfNormalization norm = CfNormalization::InverseGamma);

/// E[exp(i sum_j theta_j Z(t_j))] = exp(int psi(sum_j theta_j K(t_j - s)) ds).
std::complex<double> char_function_Z(std::span<const double> thetas, std::span<const double> times,
                                     const GmflouParams& params, CfNormalization norm = CfNormalization::InverseGamma,
                                     const quad::QuadratureControl& ctrl = {});

/// Exact characteristic function of a discretized variable sum_j w_j dL_j.
std::complex<double> scheme_char_function(std::span<const double> weights, std::span<const double> widths,
                                          const LevySpec& spec);

PathEnsemble simulate_Z(const GmflouParams& params, const EnsembleSetup& setup);
PathEnsemble simulate_Y(const GmflouParams& params, const EnsembleSetup& setup);

/// E[(Z(t) - Z(0) - L^d(t))^2] for each alpha, all alphas on one noise realization.
ConvergenceTable limit_residual_alpha_inf(std::span<const double> alphas, double t, const GmflouParams& params,
                                          const EnsembleSetup& setup);

/// E[(alpha^{h-1} int_0^t Z(s) ds - Y(t))^2] for each alpha (trapezoid rule on the grid).
ConvergenceTable limit_residual_alpha_zero(std::span<const double> alphas, double t, const GmflouParams& params,
                                           const EnsembleSetup& setup);

/// E[(Z_m(t) - Z(t))^2] for each m; the lambda vectors are nested prefixes of one draw.
ConvergenceTable aggregation_residual(std::span<const std::size_t> ms, double t, const GmflouParams& params,
                                      const EnsembleSetup& setup);

}  // namespace gmflou
