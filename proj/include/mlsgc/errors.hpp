#ifndef MLSGC_ERRORS_HPP
#define MLSGC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlsgc {

/// Invalid arguments: bad shapes, ids out of range, weights off the simplex.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed graph or label file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigensolver failure, degenerate spectral gap and similar numerical conditions.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlsgc

#endif  // MLSGC_ERRORS_HPP
