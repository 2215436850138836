#pragma once

#include <stdexcept>
#include <string>

namespace qint {

/// Invalid configuration values (zero dimensions, probabilities outside [0, 1], ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was called in a state that does not permit it
/// (sampling an empty tree, adaptive update on a static config, ...).
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

/// Non-finite values where finite ones are required.
class NumericError : public std::domain_error {
 public:
  explicit NumericError(const std::string& what) : std::domain_error(what) {}
};

/// Filesystem failures: unreadable inputs, unwritable outputs.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qint
