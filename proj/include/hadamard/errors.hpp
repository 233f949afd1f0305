#pragma once

#include <stdexcept>
#include <string>

namespace hadamard {

/// Inputs violate an operation's domain contract: model mismatch, weights
/// that do not sum to one, empty samples, parameters outside their range.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point fails its model-space constraint (off the hyperboloid sheet,
/// negative tree radius, wrong coordinate count).
class InvalidPointError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hadamard
