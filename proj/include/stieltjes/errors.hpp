#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace stieltjes {

/// Invalid input parameters (non-positive shape, wrong coefficient count, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative or adaptive method failed to reach its tolerance.
/// Carries the best estimate so callers may still inspect it.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, std::complex<double> best, double error)
        : std::runtime_error(what), best_estimate(best), error_estimate(error) {}

    std::complex<double> best_estimate;
    double error_estimate;
};

/// The denominator Q_n of a convergent vanished at the evaluation point.
class PoleError : public std::runtime_error {
public:
    PoleError(const std::string& what, std::size_t n) : std::runtime_error(what), index(n) {}

    std::size_t index;
};

/// Two evaluation routes for the same quantity disagreed beyond tolerance.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stieltjes
