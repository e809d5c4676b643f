#pragma once

#include "mwc/types.hpp"

namespace mwc {

enum class WeightKind { PositiveDefinite, PositiveSemidefinite, Zero };

const char* to_string(WeightKind kind);

/// A symmetric positive-semidefinite coupling matrix attached to an edge.
///
/// Validation symmetrizes the input as (A + A^T)/2 after the symmetry check,
/// so serialization round-off is tolerated without accepting asymmetric
/// models. Classification is cached: PositiveDefinite iff the smallest
/// eigenvalue exceeds the rank threshold, Zero iff all entries are exactly
/// zero, PositiveSemidefinite otherwise.
class MatrixWeight {
 public:
  static MatrixWeight validated(const Matrix& raw, double sym_tol = kSymTol,
                                double psd_tol = kRankTol);

  const Matrix& entries() const { return entries_; }
  WeightKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(entries_.rows()); }
  bool is_definite() const { return kind_ == WeightKind::PositiveDefinite; }

  double min_eigenvalue() const { return lambda_min_; }
  double max_eigenvalue() const { return lambda_max_; }

 private:
  MatrixWeight(Matrix entries, WeightKind kind, double lambda_min,
               double lambda_max)
      : entries_(std::move(entries)),
        kind_(kind),
        lambda_min_(lambda_min),
        lambda_max_(lambda_max) {}

  Matrix entries_;
  WeightKind kind_;
  double lambda_min_;
  double lambda_max_;
};

}  // namespace mwc
