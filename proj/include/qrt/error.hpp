#pragma once

#include <stdexcept>
#include <string>

namespace qrt {

// Base class for every failure raised by the toolkit. The CLI maps
// ConfigError to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, invalid grid size, unknown option.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Mismatched array lengths.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A density profile could not be built with the requested properties.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// The stability threshold is not defined for this profile (no stabilizing
// condition, indefinite weight, or no RT condition).
class ThresholdUndefined : public Error {
 public:
  using Error::Error;
};

// Linear solve or eigensolver breakdown.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// A bisection bracket without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrt
