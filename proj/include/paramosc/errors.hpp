#pragma once

#include <stdexcept>

namespace paramosc {

/// Invalid arguments or violated preconditions (bad interval, nonpositive
/// frequency, out-of-range time, singular kernel, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A discrete-spectrum quantity was requested where Omega^2 <= 0, or a Q
/// parameter carried no defined value.
struct SpectrumError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Numerical integration failed (step-size underflow, Wronskian blow-up).
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace paramosc
