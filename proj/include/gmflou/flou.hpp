#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gmflou/flp.hpp"
#include "gmflou/functional.hpp"
#include "gmflou/rng.hpp"

namespace gmflou {

/// Law of the random rates: -lambda ~ Gamma(shape 1 - h, rate alpha).
struct MixingParams {
    double h = 0.12;
    double alpha = 1.0;

    void validate() const;
};

inline constexpr double kLambdaFloor = 1e-6;

struct LambdaSample {
    std::vector<double> values;  // all < 0
    MixingParams mix;
    SeedLineage lineage;
    /// Draws with -lambda < kLambdaFloor that were rejected and redrawn.
    std::size_t resampled = 0;

    double min_abs() const;
};

LambdaSample sample_lambda(const MixingParams& mix, std::size_t m, SeedLineage lineage);

/// C_d Gamma(2d) / (-lambda)^{2d+1}.
double variance_flou(double lambda, double d, double m2);

/// (C_d / m^2) 2 Gamma(2d) sum_k sum_j 1 / (-(lambda_k + lambda_j) (-lambda_k)^{2d}).
double variance_aggregated(std::span<const double> lambdas, double d, double m2);

/// One (k, j) summand of the double sum above, without the 1/m^2 factor.
double aggregated_term(double lambda_k, double lambda_j, double d, double m2);

/// Brute-force C_d int_0^U int_0^U e^{lambda_k u + lambda_j v} |u - v|^{2d-1} du dv, with
/// U = 40 / min(|lambda_k|, |lambda_j|), the faster axis cut at 40 / max(...). Equals the symmetrized summand
/// (aggregated_term(k, j) + aggregated_term(j, k)) / 2.
double aggregated_term_quadrature(double lambda_k, double lambda_j, double d, double m2);

/// (1/m) sum_k e^{lambda_k s}.
double mixture_kernel(std::span<const double> lambdas, double s);
/// E[e^{lambda s}] = (alpha / (alpha + s))^{1-h}.
double mixture_kernel_limit(const MixingParams& mix, double s);

/// max(20, 12 / |lambda|).
double default_warmup(double lambda);

/// Warmup for an aggregate, set by the slowest coordinate and capped.
struct WarmupChoice {
    double window;
    bool capped;
};
WarmupChoice aggregated_warmup(std::span<const double> lambdas, double cap = 1e8);

PathEnsemble simulate_flou_fixed(double lambda, const FlpParams& params, const EnsembleSetup& setup,
                                 std::optional<double> warmup = std::nullopt);

struct AggregatedRun {
    PathEnsemble ensemble;
    LambdaSample lambdas;
    WarmupChoice warmup;
};

AggregatedRun simulate_aggregated(const MixingParams& mix, std::size_t m, const FlpParams& params,
                                  const EnsembleSetup& setup, std::optional<double> warmup = std::nullopt);

/// Grid times k/n, k = 0..floor(nT).
std::vector<double> grid_times(const SampleGrid& grid);

/// Runs one kernel over the grid of setup and returns the ensemble.
PathEnsemble simulate_moving_average(const FlpParams& params, const MovingAverageKernel& kernel,
                                     const EnsembleSetup& setup, std::string process, nlohmann::json description);

}  // namespace gmflou
