#ifndef EPON_ERRORS_HPP
#define EPON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace epon {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a special function.
struct DomainError : Error {
  using Error::Error;
};

// Root finder was handed an interval without a sign change.
struct BracketError : Error {
  using Error::Error;
};

// Parameter set outside the regime where the contention analysis is
// defined (registration cycle too long relative to the holding times,
// so the Lambert branches of the critical thresholds do not exist).
struct RegimeError : Error {
  using Error::Error;
};

// Operation requested for an operating region it is not defined in.
struct RegionError : Error {
  using Error::Error;
};

// Closed-form approximation undefined because its discriminant is negative.
struct DiscriminantError : Error {
  using Error::Error;
};

// Invalid system parameters or simulation configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Not enough post-burn-in data to form an estimate.
struct InsufficientDataError : Error {
  using Error::Error;
};

}  // namespace epon

#endif  // EPON_ERRORS_HPP
