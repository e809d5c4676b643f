#pragma once

#include "mwc/types.hpp"

namespace mwc {

/// A linear subspace of R^d held as an orthonormal basis (d x r matrix,
/// r = 0 allowed). Bases are non-unique, so equality is decided on the
/// orthogonal projector basis * basis^T, which is canonical.
class Subspace {
 public:
  static Subspace zero(int ambient);
  static Subspace full(int ambient);

  /// Orthonormalizes the columns of `vectors` (SVD, rank cut at rank_tol
  /// relative to the largest singular value).
  static Subspace span_of(const Matrix& vectors, double rank_tol = kRankTol);

  /// Span of the eigenvectors of a symmetric PSD matrix whose eigenvalues
  /// fall at or below the rank threshold.
  static Subspace nullspace_of(const Matrix& sym_psd,
                               double rank_tol = kRankTol);

  int ambient_dimension() const { return ambient_; }
  int dimension() const { return static_cast<int>(basis_.cols()); }
  bool is_zero() const { return basis_.cols() == 0; }

  const Matrix& basis() const { return basis_; }
  Matrix projector() const { return basis_ * basis_.transpose(); }

  /// Smallest subspace containing both operands.
  Subspace sum(const Subspace& other, double rank_tol = kRankTol) const;

  /// Intersection, computed as the common nullspace of the stacked
  /// projector complements (I - P_a over I - P_b).
  Subspace intersect(const Subspace& other, double rank_tol = kRankTol) const;

  /// ||v - P v|| as a membership residual.
  double membership_residual(const Vector& v) const;

  /// True iff ||v - P v|| <= tol * max(||v||, 1).
  bool contains(const Vector& v, double tol) const;

  /// Projector comparison: max |P_a - P_b| <= tol.
  bool same_as(const Subspace& other, double tol = 1e-9) const;

 private:
  Subspace(int ambient, Matrix basis)
      : ambient_(ambient), basis_(std::move(basis)) {}

  void require_same_ambient(const Subspace& other) const;

  int ambient_;
  Matrix basis_;
};

}  // namespace mwc
