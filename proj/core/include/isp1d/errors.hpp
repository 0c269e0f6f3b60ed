#pragma once

#include <stdexcept>
#include <string>

namespace isp1d {

/// Malformed input: wrong lengths, mismatched grids, bad schema fields.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation (k <= 0, K <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation produced NaN/Inf or an ill-defined ratio.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isp1d
