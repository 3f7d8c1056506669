#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmflou/gmflou.hpp"
#include "gmflou/lattice.hpp"
#include "gmflou/levy_noise.hpp"

namespace gmflou {

/// One characteristic-function probe: joint thetas at the given times.
struct CfPoint {
    std::vector<double> times;
    std::vector<double> thetas;
};

struct RunConfig {
    std::string command = "simulate";
    /// flp | flou | aggregated | Z | Y
    std::string process = "Z";

    double d = 0.2;
    double h = 0.12;
    double alpha = 1.0;
    double lambda = -1.0;
    std::size_t m = 200;
    LevySpec spec = LevySpec::compensated_gamma(1.0, 2.0);

    SampleGrid grid{128, 1.0, 0};
    SchemeSpec scheme;
    std::optional<double> warmup;

    std::size_t replicas = 2000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = "out";
    bool gnuplot = false;

    double k_sigma = 4.0;
    double allowance = 0.05;
    /// Multiplies every closed-form target in verify (1 for real runs).
    double target_scale = 1.0;
    CfNormalization cf_normalization = CfNormalization::InverseGamma;
    std::vector<CfPoint> cf_points{{{1.0}, {0.25}}, {{1.0}, {0.5}}};

    std::vector<std::size_t> m_axis{10, 100, 1000};
    std::vector<double> alpha_up{1e2, 1e3, 1e4};
    std::vector<double> alpha_down{1.0, 0.1, 0.01};
    std::vector<int> n_axis{32, 64, 128};
    double converge_time = 1.0;

    GmflouParams gmflou() const { return {d, h, alpha, spec}; }
    FlpParams flp() const { return {d, spec}; }
    EnsembleSetup setup() const { return {grid, scheme, seed, replicas, threads}; }

    /// Throws ParameterError naming the first violated condition.
    void validate() const;
};

/// Reads a config document; a replay sidecar ({"config": {...}, ...}) is accepted too.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
/// Everything that determines the output (thread count and output directory excluded).
nlohmann::json config_to_json(const RunConfig& c);

}  // namespace gmflou
