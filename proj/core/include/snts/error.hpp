#pragma once

#include <stdexcept>
#include <string>

namespace snts {

/// Base of every error thrown by the library. The CLI maps each subclass to
/// its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is out of its admissible range (alpha, theta, trimming, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested block length leaves fewer than two blocks, or a trimmed
/// scan range is empty.
class InfeasibleParameters : public Error {
 public:
  using Error::Error;
};

/// The data carry no variation where the statistic needs some (zero block
/// variance, constant residuals, degenerate scan denominator).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

/// Input text (CSV, key-value config) could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace snts
