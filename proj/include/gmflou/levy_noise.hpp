#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmflou/rng.hpp"

namespace gmflou {

/// Gamma subordinator minus its mean. Parameterized by (shape, rate): the
/// increment over a step dt is Gamma(shape = a*dt, rate = b) - a*dt/b, so
/// E[L(1)^2] = a / b^2.
struct CompensatedGamma {
    double a = 1.0;
    double b = 2.0;
};

struct NormalJumps {
    double mean = 0.0;
    double sd = 1.0;
};

struct ExponentialJumps {
    double rate = 1.0;
};

using JumpDistribution = std::variant<NormalJumps, ExponentialJumps>;

/// Compound Poisson process with the exact drift rate*E[J]*dt removed.
struct CompoundPoissonCompensated {
    double rate = 1.0;
    JumpDistribution jumps = NormalJumps{};
};

/// The zero-mean, finite-variance, purely discontinuous driving Lévy process.
class LevySpec {
public:
    using Kind = std::variant<CompensatedGamma, CompoundPoissonCompensated>;

    /// Throws ParameterError on non-positive a, b, rate, sd or jump rate.
    explicit LevySpec(Kind kind);

    static LevySpec compensated_gamma(double a, double b) { return LevySpec(CompensatedGamma{a, b}); }

    const Kind& kind() const { return kind_; }
    /// E[L(1)^2].
    double m2() const { return m2_; }
    std::string describe() const;

    /// One increment L(t + dt) - L(t).
    double draw_increment(Sampler& sampler, double dt) const;

private:
    Kind kind_;
    double m2_;
};

/// n independent increments over consecutive steps of length dt.
std::vector<double> sample_increments(const LevySpec& spec, SeedLineage lineage, std::size_t n, double dt);

/// Increments over cells of the given (possibly unequal) widths, in order.
void sample_increments(const LevySpec& spec, Sampler& sampler, std::span<const double> widths,
                       std::span<double> out);

/// psi(u) = int (e^{iux} - 1 - iux) nu(dx), so that E[exp(iu L(1))] = exp(psi(u)).
std::complex<double> cumulant_psi(const LevySpec& spec, double u);

double second_moment(const LevySpec& spec);

void to_json(nlohmann::json& j, const LevySpec& spec);
LevySpec levy_spec_from_json(const nlohmann::json& j);

}  // namespace gmflou
