#pragma once

#include <stdexcept>
#include <string>

namespace pnmdi {

/// Precondition violated by the caller (bad coefficients, empty mode set, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A photon occupation or thermal tail does not fit under the configured cutoff.
class CutoffError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Requested a construction that only exists for specific dimensions.
class UnsupportedDimension : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A runtime invariant check failed (non-Hermitian state, probabilities not
/// summing to one, non-physical reconstruction under exact statistics).
class NumericalIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pnmdi
