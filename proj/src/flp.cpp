#include "gmflou/flp.hpp"

#include <cmath>
#include <numbers>

#include "gmflou/errors.hpp"
#include "gmflou/fft_correlate.hpp"
#include "gmflou/numerics.hpp"

namespace gmflou {

void validate_memory_parameter(double d) {
    if (!(d > 0.0 && d < 0.5)) throw ParameterError("memory parameter d must lie in (0, 1/2)");
}

void FlpParams::validate() const { validate_memory_parameter(d); }

double kernel_f(double d, double t, double s) {
    return (pos_pow(t - s, d) - pos_pow(-s, d)) / std::tgamma(d + 1.0);
}

double vd_squared(double d, double m2) {
    return m2 / (2.0 * std::tgamma(2.0 * d + 2.0) * std::sin(std::numbers::pi * (d + 0.5)));
}

double flp_covariance(double d, double s, double t, double m2) {
    const double p = 2.0 * d + 1.0;
    return vd_squared(d, m2) * (std::pow(std::fabs(t), p) + std::pow(std::fabs(s), p) - std::pow(std::fabs(t - s), p));
}

double cd_constant(double d, double m2) {
    if (!(d > 0.0 && d < 0.5)) throw DomainError("cd_constant: d must lie in (0, 1/2)");
    return std::tgamma(1.0 - 2.0 * d) * m2 / (std::tgamma(d) * std::tgamma(1.0 - d));
}

double increment_covariance_delta(double d, long n_lag, double hstep, double m2) {
    if (n_lag < 1) throw DomainError("increment_covariance_delta: lag must be >= 1");
    if (!(hstep > 0.0)) throw DomainError("increment_covariance_delta: step must be positive");
    const double p = 2.0 * d + 1.0;
    const double n = static_cast<double>(n_lag);
    // Second difference of x^p written as a difference of stable first differences.
    const double second = pow_diff(n, 1.0, p) - pow_diff(n - 1.0, 1.0, p);
    return vd_squared(d, m2) * std::pow(hstep, p) * second;
}

namespace {

double raw_increment_weight(const Lattice& lat, KernelRule rule, double d, double gamma_d1, std::size_t c,
                            std::size_t j) {
    if (j > c) return 0.0;
    const double wc = lat.width(c);
    if (rule == KernelRule::LeftPoint) {
        return pow_diff(lat.left(c) - lat.left(j), wc, d) / gamma_d1;
    }
    const double p = d + 1.0;
    if (j == c) return std::pow(wc, d) / (p * gamma_d1);
    const double wj = lat.width(j);
    const double x = lat.left(c) - lat.right(j);
    return (pow_diff(x + wj, wc, p) - pow_diff(x, wc, p)) / (wj * p * gamma_d1);
}

}  // namespace

FlpOperator::FlpOperator(std::shared_ptr<const Lattice> lattice, double d)
    : lattice_(std::move(lattice)), d_(d), gamma_d1_(std::tgamma(d + 1.0)) {
    validate_memory_parameter(d);
    const Lattice& lat = *lattice_;
    const double h = lat.step();
    const std::size_t fine = lat.fine_cells();
    toeplitz_.resize(fine);
    if (lat.rule() == KernelRule::LeftPoint) {
        const double scale = std::pow(h, d) / gamma_d1_;
        for (std::size_t k = 0; k < fine; ++k) toeplitz_[k] = scale * pow_diff(static_cast<double>(k), 1.0, d);
    } else {
        const double p = d + 1.0;
        const double scale = std::pow(h, d) / (p * gamma_d1_);
        toeplitz_[0] = scale;
        for (std::size_t k = 1; k < fine; ++k) {
            const double kk = static_cast<double>(k);
            toeplitz_[k] = scale * (pow_diff(kk, 1.0, p) - pow_diff(kk - 1.0, 1.0, p));
        }
    }

    const std::size_t cells = lat.cells();
    const std::size_t tail = lat.tail_cells();
    tail_offset_.resize(tail);
    std::size_t total = 0;
    for (std::size_t j = 0; j < tail; ++j) {
        tail_offset_[j] = total;
        total += cells - j;
    }
    tail_block_.resize(total);
    for (std::size_t j = 0; j < tail; ++j) {
        for (std::size_t c = j; c < cells; ++c) {
            tail_block_[tail_offset_[j] + (c - j)] = raw_increment_weight(lat, lat.rule(), d_, gamma_d1_, c, j);
        }
    }
}

double FlpOperator::increment_weight(std::size_t c, std::size_t j) const {
    if (j > c) return 0.0;
    const Lattice& lat = *lattice_;
    if (lat.is_fine(j)) return toeplitz_[c - j];
    return tail_entry(c, j);
}

double FlpOperator::value_weight(double u, std::size_t j) const {
    const Lattice& lat = *lattice_;
    const double a = lat.left(j);
    const double b = lat.right(j);
    if (lat.rule() == KernelRule::LeftPoint) {
        if (a <= std::min(u, 0.0)) return pow_diff(-a, u, d_) / gamma_d1_;
        return (pos_pow(u - a, d_) - pos_pow(-a, d_)) / gamma_d1_;
    }
    const double p = d_ + 1.0;
    const double w = b - a;
    if (b <= std::min(u, 0.0)) {
        return (pow_diff(-a, u, p) - pow_diff(-b, u, p)) / (w * p * gamma_d1_);
    }
    const double first = pos_pow(u - a, p) - pos_pow(u - b, p);
    const double second = pos_pow(-a, p) - pos_pow(-b, p);
    return (first - second) / (w * p * gamma_d1_);
}

std::vector<double> FlpOperator::pull_back(std::span<const double> stage2) const {
    const Lattice& lat = *lattice_;
    const std::size_t cells = lat.cells();
    const std::size_t fb = lat.tail_cells();
    std::vector<double> w(cells, 0.0);

    const auto fine = correlate(stage2.subspan(fb), toeplitz_);
    std::copy(fine.begin(), fine.end(), w.begin() + static_cast<std::ptrdiff_t>(fb));

    for (std::size_t j = 0; j < fb; ++j) {
        const double* column = tail_block_.data() + tail_offset_[j];
        double acc = 0.0;
        for (std::size_t c = j; c < cells; ++c) acc += stage2[c] * column[c - j];
        w[j] = acc;
    }
    return w;
}

std::vector<double> FlpOperator::pull_back_direct(std::span<const double> stage2) const {
    const std::size_t cells = lattice_->cells();
    std::vector<double> w(cells, 0.0);
    for (std::size_t j = 0; j < cells; ++j) {
        double acc = 0.0;
        for (std::size_t c = j; c < cells; ++c) acc += stage2[c] * increment_weight(c, j);
        w[j] = acc;
    }
    return w;
}

std::vector<double> FlpOperator::increments_direct(std::span<const double> noise) const {
    const std::size_t cells = lattice_->cells();
    std::vector<double> inc(cells, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= c; ++j) acc += increment_weight(c, j) * noise[j];
        inc[c] = acc;
    }
    return inc;
}

std::vector<double> FlpOperator::node_values_direct(std::span<const double> noise) const {
    const auto inc = increments_direct(noise);
    const std::size_t zero = lattice_->zero_node();
    std::vector<double> values(lattice_->nodes().size(), 0.0);
    for (std::size_t i = zero + 1; i < values.size(); ++i) values[i] = values[i - 1] + inc[i - 1];
    for (std::size_t i = zero; i-- > 0;) values[i] = values[i + 1] - inc[i];
    return values;
}

}  // namespace gmflou
