#pragma once

#include <stdexcept>
#include <string>

namespace gmflou {

/// Invalid model or simulation parameters (usage/validation, exit code 2).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain where a closed form is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Index or lag outside the simulated grid.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Not enough replicas or otherwise unusable Monte Carlo input.
class StatisticsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two ensembles that were not driven by the same noise realization.
class CouplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadrature or other numerical routine failed to converge (exit code 3).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Least-squares fit on invalid input (e.g. non-positive covariances).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gmflou
