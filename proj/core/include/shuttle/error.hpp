#pragma once

#include <stdexcept>
#include <string>

namespace shuttle {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  InvalidArgument,        // precondition violated by the caller
  Config,                 // malformed or inconsistent job configuration
  Escape,                 // particle left the trap
  BoundaryContamination,  // wavefunction reached the grid edge
  IllConditioned,         // linear system too close to singular
  NumericalQuality,       // a numerical tolerance could not be met
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::InvalidArgument, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class EscapeError : public Error {
 public:
  EscapeError(const std::string& what, double time)
      : Error(ErrorKind::Escape, what), time_(time) {}

  /// Time at which the escape was detected.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class BoundaryContaminationError : public Error {
 public:
  BoundaryContaminationError(const std::string& what, double edge_density)
      : Error(ErrorKind::BoundaryContamination, what), edge_density_(edge_density) {}

  double edge_density() const noexcept { return edge_density_; }

 private:
  double edge_density_;
};

class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double condition_number)
      : Error(ErrorKind::IllConditioned, what), condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::NumericalQuality, what) {}
};

/// Exit code convention shared by every front end: 0 ok, 2 config, 3 physics, 4 numerics.
int exit_code_for(ErrorKind kind) noexcept;

void require(bool condition, const std::string& message);

}  // namespace shuttle
