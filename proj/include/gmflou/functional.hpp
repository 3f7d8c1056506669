#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmflou/flp.hpp"
#include "gmflou/kernels.hpp"

namespace gmflou {

/// A family of random variables X_i = sum_j weights(i, j) * dL_j, one per
/// row, where dL_j is the driving Lévy increment over lattice cell j.
struct LinearFunctional {
    std::string name;
    std::vector<double> times;
    std::size_t cells = 0;
    std::vector<double> weights;  // times.size() x cells, row-major

    std::size_t rows() const { return times.size(); }
    std::span<const double> row(std::size_t i) const { return {weights.data() + i * cells, cells}; }
    std::span<double> row(std::size_t i) { return {weights.data() + i * cells, cells}; }
};

/// L^d(t) for each t.
LinearFunctional compile_flp(const FlpOperator& op, std::string name, std::span<const double> times);

/// int k(t, u) dL^d(u) for each t.
LinearFunctional compile_moving_average(const FlpOperator& op, const MovingAverageKernel& kernel, std::string name,
                                        std::span<const double> times);

/// One term coeff * int k(time, u) dL^d(u) of a linear combination.
struct KernelTerm {
    const MovingAverageKernel* kernel;
    double time;
    double coeff;
};

/// One-row functional sum over terms, assembled before the first stage so
/// that only one pull-back is needed.
LinearFunctional compile_combination(const FlpOperator& op, std::span<const KernelTerm> terms, std::string name,
                                     double time);

/// One-row functional sum_i coeffs[i] * f.row(i).
LinearFunctional combine_rows(const LinearFunctional& f, std::span<const double> coeffs, std::string name,
                              double time);

/// One-row functional ca * a.row(ia) + cb * b.row(ib).
LinearFunctional difference(const LinearFunctional& a, std::size_t ia, double ca, const LinearFunctional& b,
                            std::size_t ib, double cb, std::string name);

/// Trapezoid weights for int_0^{t_k} on a uniform grid with the given step (k + 1 entries).
std::vector<double> trapezoid_weights(std::size_t k, double step);

/// Exact covariance of the discretized variables: m2 * sum_j a_j b_j |cell j|.
double scheme_covariance(std::span<const double> a, std::span<const double> b, std::span<const double> widths,
                         double m2);

/// Simulated values of one functional: replicas x rows, replica-major.
struct PathEnsemble {
    std::string process;
    nlohmann::json params;
    std::vector<double> times;
    std::size_t replicas = 0;
    std::vector<double> values;
    std::uint64_t root_seed = 0;
    std::string lattice_signature;

    std::size_t points() const { return times.size(); }
    double at(std::size_t replica, std::size_t point) const { return values[replica * times.size() + point]; }
    std::span<const double> path(std::size_t replica) const {
        return {values.data() + replica * times.size(), times.size()};
    }
    /// All replicas at one time index.
    std::vector<double> column(std::size_t point) const;
};

/// Evaluates every functional on the same noise: replica r draws its cell
/// increments from stream (root_seed, r). Replicas are split into contiguous
/// blocks across threads and written by index, so the result does not depend
/// on the thread count.
std::vector<PathEnsemble> simulate_coupled(const Lattice& lattice, const LevySpec& spec,
                                           std::span<const LinearFunctional> functionals, std::uint64_t root_seed,
                                           std::size_t replicas, unsigned threads = 1);

/// Thread count used when 0 is requested.
unsigned resolve_threads(unsigned requested);

}  // namespace gmflou

namespace gmflou {

/// Grid, scheme and Monte Carlo settings shared by the simulate_* entry points.
struct EnsembleSetup {
    SampleGrid grid;
    SchemeSpec scheme;
    std::uint64_t root_seed = 1;
    std::size_t replicas = 1000;
    unsigned threads = 1;
};

/// L^d on the grid of setup.
PathEnsemble simulate_flp(const FlpParams& params, const EnsembleSetup& setup);

/// Stream reserved for model randomness that is not replica noise (e.g. lambda draws).
inline constexpr std::uint64_t kModelStream = ~std::uint64_t{0};

}  // namespace gmflou
