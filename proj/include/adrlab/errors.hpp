#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adrlab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value. `key()` holds the offending field or config path.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

  /// "missing required key: <key>"
  static ConfigError missing(const std::string& key) {
    return ConfigError(key, "missing required key: " + key, Raw{});
  }

 private:
  struct Raw {};
  ConfigError(std::string key, const std::string& message, Raw)
      : Error(message), key_(std::move(key)) {}
  std::string key_;
};

/// Invalid runtime input (negative time, non-finite initial sample, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Configuration outside what a scheme or check supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Non-finite intermediate quantity.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A time-stepping run produced a non-finite value.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : NumericError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A step was refused because the stability report failed.
/// The rendered report travels in `report()`.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, std::string report)
      : Error(what), report_(std::move(report)) {}
  const std::string& report() const noexcept { return report_; }

 private:
  std::string report_;
};

}  // namespace adrlab
