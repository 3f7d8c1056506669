#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmflou/functional.hpp"

namespace gmflou {

inline constexpr std::size_t kMinReplicas = 30;

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// A Monte Carlo estimate checked against a closed form:
/// pass iff |mc_estimate - target| <= k_sigma * std_error + allowance * |target|.
struct MomentReport {
    std::string quantity;
    nlohmann::json params = nlohmann::json::object();
    double mc_estimate = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double k_sigma = 4.0;
    double allowance = 0.0;
    bool pass = false;

    double tolerance() const;
    static MomentReport make(std::string quantity, nlohmann::json params, Estimate est, double target,
                             double allowance, double k_sigma = 4.0);
};

void to_json(nlohmann::json& j, const MomentReport& r);

/// Discretization allowance: base at n = 128, halving each time n doubles.
double discretization_allowance(int n, double base = 0.05);

struct ConvergenceTable {
    std::string axis;
    std::vector<double> axis_values;
    std::vector<double> residuals;
    std::vector<double> std_errors;
    /// Exact second moment of the discretized residual (no Monte Carlo noise).
    std::vector<double> scheme_residuals;
    nlohmann::json params = nlohmann::json::object();

    /// True iff residuals are strictly decreasing along the axis.
    bool monotone() const;
};

void to_json(nlohmann::json& j, const ConvergenceTable& t);

/// Sample mean (order 1) or raw second moment (order 2) with plain standard error.
Estimate ensemble_moment(const PathEnsemble& ens, std::size_t t_index, int order);
Estimate sample_mean(std::span<const double> x);
/// Unbiased sample variance with the delta-method standard error.
Estimate sample_variance(std::span<const double> x);
Estimate sample_covariance(std::span<const double> x, std::span<const double> y);
/// Mean of x^2 (for residuals that are zero-mean by construction).
Estimate mean_square(std::span<const double> x);

/// Var(num) / Var(den) for two samples of the same replicas (delta-method standard error).
Estimate variance_ratio(std::span<const double> num, std::span<const double> den);

/// Cross-replica covariance between the base time index and base + lag.
std::vector<Estimate> empirical_autocovariance(const PathEnsemble& ens, std::size_t base,
                                               std::span<const std::size_t> lag_indices);

struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least squares of log y on log x. Throws FitError on non-positive entries.
PowerFit fit_tail_exponent(std::span<const double> x, std::span<const double> y);

struct CfEstimate {
    std::complex<double> value;
    double se_re = 0.0;
    double se_im = 0.0;
};

/// (1/R) sum_r exp(i sum_j theta_j x_j^(r)); columns[j] holds the replicas of the j-th variable.
CfEstimate empirical_char_function(std::span<const std::vector<double>> columns, std::span<const double> thetas);

/// E[(A(t) - B(t))^2] for two ensembles driven by the same noise.
Estimate coupled_l2_error(const PathEnsemble& a, const PathEnsemble& b, std::size_t t_index);

/// max over dyadic pairs s < t in [0, 1] (grid levels 1..max_level) of
/// mean (X(t) - X(s))^2 / (t - s)^{1+2d}. The ensemble grid must contain the dyadic points.
double increment_bound_check(const PathEnsemble& ens, double d, int max_level = 6);

}  // namespace gmflou
