#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mwc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute tolerance on |A - A^T| when accepting a weight matrix.
inline constexpr double kSymTol = 1e-12;

/// Relative threshold (floor 1.0 on the scale) shared by PSD validation,
/// definite/semidefinite classification, and every rank decision in the
/// library. One regime avoids classification disagreements across modules.
inline constexpr double kRankTol = 1e-9;

/// Eigenvalue / singular-value cutoff at a given spectrum scale.
inline double rank_threshold(double scale, double tol = kRankTol) {
  return tol * std::max(1.0, scale);
}

enum class ErrorKind {
  AsymmetricWeight,
  NotPositiveSemidefinite,
  DuplicateEdge,
  SelfLoop,
  DimensionMismatch,
  AmbientMismatch,
  NotAPath,
  EigensolverFailure,
  NotConsensusGraph,
  StepTooLarge,
  NotConverged,
  NotUnitVector,
  InconsistentBearings,
  ParseError,
  ValidationError,
  AgreementFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace mwc
