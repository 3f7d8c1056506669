#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "gmflou/lattice.hpp"
#include "gmflou/levy_noise.hpp"

namespace gmflou {

/// Fractional Lévy process L^d(t) = int f_t(s) dL(s).
struct FlpParams {
    double d = 0.25;
    LevySpec spec = LevySpec::compensated_gamma(1.0, 2.0);

    void validate() const;
};

/// Throws ParameterError unless 0 < d < 1/2.
void validate_memory_parameter(double d);

/// f_t(s) = [(t - s)_+^d - (-s)_+^d] / Gamma(d + 1).
double kernel_f(double d, double t, double s);

/// Printed variance prefactor E[L1^2] / (2 Gamma(2d + 2) sin(pi (d + 1/2))).
double vd_squared(double d, double m2);

/// Cov(L^d(s), L^d(t)) = V_d^2 (|t|^{2d+1} + |s|^{2d+1} - |t - s|^{2d+1}).
///
/// The usual statement carries an extra factor 1/2; with V_d^2 normalized as
/// in vd_squared() that would give Var L^d(1) = V_d^2, while the isometry gives
/// C_d / (d (2d + 1)) = 2 V_d^2. The form here is the one consistent with
/// increment_covariance_delta() and with the double-integral identity.
double flp_covariance(double d, double s, double t, double m2);

/// C_d = Gamma(1 - 2d) E[L1^2] / (Gamma(d) Gamma(1 - d)).
double cd_constant(double d, double m2);

/// Covariance of two increments of length hstep that are n_lag steps apart:
/// V_d^2 h^{2d+1} [(n+1)^{2d+1} + (n-1)^{2d+1} - 2 n^{2d+1}].
double increment_covariance_delta(double d, long n_lag, double hstep, double m2);

/// First Riemann-Stieltjes stage: L^d on a lattice as a linear map of the
/// Lévy increments over the lattice cells.
///
/// D(c, j) is the weight of noise cell j in the L^d increment over cell c. On
/// the uniform part of the lattice D is Toeplitz and is stored as one
/// sequence; columns belonging to tail cells are stored densely.
class FlpOperator {
public:
    FlpOperator(std::shared_ptr<const Lattice> lattice, double d);

    const Lattice& lattice() const { return *lattice_; }
    std::shared_ptr<const Lattice> lattice_ptr() const { return lattice_; }
    double d() const { return d_; }

    double increment_weight(std::size_t c, std::size_t j) const;
    /// Weight of noise cell j in L^d(u).
    double value_weight(double u, std::size_t j) const;
    /// D(c, j) for fine cells as a function of c - j.
    std::span<const double> toeplitz() const { return toeplitz_; }

    /// w[j] = sum_c stage2[c] D(c, j): the noise weights of the process
    /// sum_c stage2[c] * (L^d increment over c).
    std::vector<double> pull_back(std::span<const double> stage2) const;
    /// Same, by the plain double loop.
    std::vector<double> pull_back_direct(std::span<const double> stage2) const;

    /// Reference evaluation of all L^d cell increments for one noise vector, O(cells^2).
    std::vector<double> increments_direct(std::span<const double> noise) const;
    /// L^d at every lattice node (cumulative increments, anchored at L^d(0) = 0).
    std::vector<double> node_values_direct(std::span<const double> noise) const;

private:
    double tail_entry(std::size_t c, std::size_t j) const { return tail_block_[tail_offset_[j] + (c - j)]; }

    std::shared_ptr<const Lattice> lattice_;
    double d_;
    double gamma_d1_;
    std::vector<double> toeplitz_;
    std::vector<double> tail_block_;
    std::vector<std::size_t> tail_offset_;
};

}  // namespace gmflou
