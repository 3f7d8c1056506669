#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmflou/lattice.hpp"

namespace gmflou {

/// Second-stage kernel k(t, u) integrated against dL^d(u).
class MovingAverageKernel {
public:
    virtual ~MovingAverageKernel() = default;

    /// k(t, u).
    virtual double value(double t, double u) const = 0;
    /// Weight of the L^d increment over the cell [a, b] in the sum for time t:
    /// k(t, a) for LeftPoint, the exact mean of k(t, .) over [a, b] for CellAverage.
    virtual double cell_weight(double t, double a, double b, KernelRule rule) const = 0;
    virtual std::string name() const = 0;
};

/// g(t - u) = (alpha / (alpha + t - u))^{1-h} for u < t.
class GammaMixedKernel final : public MovingAverageKernel {
public:
    GammaMixedKernel(double alpha, double h);

    double value(double t, double u) const override;
    double cell_weight(double t, double a, double b, KernelRule rule) const override;
    std::string name() const override { return "gamma_mixed"; }

private:
    double alpha_;
    double h_;
    double scale_;
};

/// e^{lambda (t - u)} for t - window <= u < t (window optional).
class ExponentialKernel final : public MovingAverageKernel {
public:
    ExponentialKernel(double lambda, std::optional<double> window = std::nullopt);

    double value(double t, double u) const override;
    double cell_weight(double t, double a, double b, KernelRule rule) const override;
    std::string name() const override { return "exponential"; }

private:
    double lambda_;
    double window_;
};

/// (1/m) sum_k e^{lambda_k (t - u)}: the aggregate of m fLOU coordinates.
class MixtureKernel final : public MovingAverageKernel {
public:
    MixtureKernel(std::vector<double> lambdas, std::optional<double> window = std::nullopt);

    double value(double t, double u) const override;
    double cell_weight(double t, double a, double b, KernelRule rule) const override;
    std::string name() const override { return "mixture"; }

private:
    std::vector<ExponentialKernel> parts_;
};

/// (1/h) [(t - u)_+^h - (-u)_+^h].
class YKernel final : public MovingAverageKernel {
public:
    explicit YKernel(double h);

    double value(double t, double u) const override;
    double cell_weight(double t, double a, double b, KernelRule rule) const override;
    std::string name() const override { return "y"; }

private:
    double h_;
};

/// 1{0 <= u < t}: integrating it against dL^d gives L^d(t).
class IndicatorKernel final : public MovingAverageKernel {
public:
    double value(double t, double u) const override { return (u >= 0.0 && u < t) ? 1.0 : 0.0; }
    double cell_weight(double t, double a, double b, KernelRule rule) const override;
    std::string name() const override { return "indicator"; }
};

}  // namespace gmflou
