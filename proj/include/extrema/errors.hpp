#pragma once

#include <stdexcept>
#include <string>

namespace extrema {

/// Bad argument value (out-of-domain state, empty series, malformed path).
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent experiment or generator configuration.
class ConfigurationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Query outside the support of a distribution or intensity measure.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// The limit law would be degenerate (density at the center is 0 or infinite).
class DegenerateLimitError : public DomainError {
  public:
    using DomainError::DomainError;
};

}  // namespace extrema
