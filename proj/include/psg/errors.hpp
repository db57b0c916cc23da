#pragma once

#include <stdexcept>
#include <string>

namespace psg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on parameters failed (bad exponent, even n, malformed literal).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A request reaches past the data it runs on (x above the sieve limit).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A table was asked to grow beyond its configured memory cap.
class CapacityError : public RangeError {
 public:
  using RangeError::RangeError;
};

/// The certified interval of a fixed-point value straddles an integer, so its
/// floor is undecided at the current precision. Callers escalate the bit count.
class AmbiguousFloor : public Error {
 public:
  using Error::Error;
};

}  // namespace psg
