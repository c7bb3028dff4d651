#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace headsim {

using Complex = std::complex<double>;

// Time convention is e^{+jωt} everywhere: lossy media have Im(ε) < 0.
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m
inline constexpr double kFreeSpaceImpedance = 376.730313668;  // Ω

/// Argument outside an operation's mathematical domain (non-positive frequency,
/// |Γ| > 1, inclusion out of bounds, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or schema-violating input document. `key_path` names the offending
/// key, e.g. "frequencies_ghz[1]" or "tissues[3].sigma".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : std::runtime_error(key_path.empty() ? message : key_path + ": " + message),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& message)
      : std::runtime_error(message + ": " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Runtime numerical failure (instability, non-finite result, mismatched runs).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace headsim
