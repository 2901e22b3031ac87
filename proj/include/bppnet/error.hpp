#pragma once

#include <stdexcept>
#include <string>

namespace bppnet {

// Which invariant a rejected input violated.
enum class Violation {
    DiskRadius,
    PathLossExponent,
    TxCount,
    ActiveCount,
    ServingOrder,
    ReceiverRadius,
    Threshold,
    Antennas,
    CacheProblem,
    Placement,
    Sweep,
    Simulation,
    Quadrature,
};

const char* to_string(Violation v);

class ValidationError : public std::invalid_argument {
public:
    ValidationError(Violation v, const std::string& what)
        : std::invalid_argument(what), violation_(v) {}

    Violation violation() const noexcept { return violation_; }

private:
    Violation violation_;
};

// Argument outside the support of a density or the domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A truncated law was asked to condition on an event of probability zero.
class ConditioningError : public DomainError {
public:
    using DomainError::DomainError;
};

// Series or quadrature failed to reach its tolerance within budget.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best_estimate = 0.0,
                   double error_estimate = 0.0)
        : std::runtime_error(what),
          best_estimate_(best_estimate),
          error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

} // namespace bppnet
