#pragma once

#include <stdexcept>
#include <string>

namespace davies {

// Argument outside the mathematical domain of an operation (negative time,
// non-finite entries, probability argument outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally invalid input: unnormalized couplings, overlapping windows,
// malformed configuration.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds a configured truncation (photon-number sector, N_max).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace davies
