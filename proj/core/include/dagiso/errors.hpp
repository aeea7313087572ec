#pragma once

#include <stdexcept>
#include <string>

namespace dagiso {

/// Malformed input: cyclic graph, out-of-range node, overlapping index sets.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A run parameter is out of its admissible range (e.g. q <= d_bound).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input exceeds an enumeration guard; raised instead of truncating.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A linear solve hit a zero pivot. The sampler treats this as a rejection.
class SingularPivotError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The sampler exhausted its rejection budget.
class ResampleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Oracle and randomized classification disagreed.
class CrossCheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dagiso
