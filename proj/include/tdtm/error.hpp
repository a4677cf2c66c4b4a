#pragma once

#include <stdexcept>
#include <string>

namespace tdtm {

// Input or configuration that cannot be honoured (exit code 1 at the CLI).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model/dataset/config text. Message names the offending field.
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Vector lengths that disagree with the model dimensions.
class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// File system failures (exit code 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulator bug: protocol monitor, one-hot or kernel ordering violation
// (exit code 3). Never raised for bad data.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// schedule() with a timestamp earlier than the current simulation time.
class TimeViolation : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

}  // namespace tdtm
