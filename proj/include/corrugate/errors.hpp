#pragma once

#include <stdexcept>
#include <string>

namespace corrugate {

/// Failure categories. The CLI exits with 1 for bad input (precondition,
/// domain, config, io) and 2 for numerical failures.
enum class ErrorKind {
  Domain,                // argument outside the certified/valid range
  Precondition,          // k <= k_gamma, non-immersed input, bad dimension
  FrameDegeneracy,       // curvature vanishes, no normal frame
  StepFailure,           // no admissible lambda within the cap
  Preprocessing,         // curvature-zero removal failed
  IsotopyUncertified,    // embedding check failed along a knot run
  Io,
  Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class PreconditionViolation : public Error {
 public:
  explicit PreconditionViolation(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

class FrameDegeneracy : public Error {
 public:
  explicit FrameDegeneracy(const std::string& what) : Error(ErrorKind::FrameDegeneracy, what) {}
};

class PreprocessingError : public Error {
 public:
  explicit PreprocessingError(const std::string& what) : Error(ErrorKind::Preprocessing, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

}  // namespace corrugate
