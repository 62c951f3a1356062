#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stagger {

/// A state left the realizable set of the model (non-positive density,
/// indefinite second moment, ...).
class InvalidState : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An implicit solve exhausted its iteration or damping budget.
class SolverDivergence : public std::runtime_error {
public:
  SolverDivergence(const std::string& what, std::vector<double> best_iterate,
                   double residual_norm, int iterations)
      : std::runtime_error(what), best_iterate_(std::move(best_iterate)),
        residual_norm_(residual_norm), iterations_(iterations) {}

  const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }
  double residual_norm() const noexcept { return residual_norm_; }
  int iterations() const noexcept { return iterations_; }

private:
  std::vector<double> best_iterate_;
  double residual_norm_;
  int iterations_;
};

/// Residual evaluation failed while building a finite-difference Jacobian.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& what, int column)
      : std::runtime_error(what), column_(column) {}
  int column() const noexcept { return column_; }

private:
  int column_;
};

/// Bisection was asked to work on an interval without a sign change.
class NoBracket : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The two entropic stage solvers returned different roots.
class DisagreementError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The exact Riemann solution contains a vacuum region.
class VacuumError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UnknownPreset : public ConfigError {
public:
  using ConfigError::ConfigError;
};

}  // namespace stagger
