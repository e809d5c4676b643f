#include "mwc/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <sstream>

namespace mwc {

namespace {

Matrix left_singular_basis(const Matrix& m, double rank_tol) {
  // Columns spanning range(m), cut at the relative rank threshold.
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const double cutoff =
      rank_threshold(sigma.size() ? sigma(0) : 0.0, rank_tol);
  int rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

Subspace Subspace::zero(int ambient) {
  if (ambient < 0) fail(ErrorKind::ValidationError, "negative ambient dim");
  return Subspace(ambient, Matrix(ambient, 0));
}

Subspace Subspace::full(int ambient) {
  if (ambient < 0) fail(ErrorKind::ValidationError, "negative ambient dim");
  return Subspace(ambient, Matrix::Identity(ambient, ambient));
}

Subspace Subspace::span_of(const Matrix& vectors, double rank_tol) {
  return Subspace(static_cast<int>(vectors.rows()),
                  left_singular_basis(vectors, rank_tol));
}

Subspace Subspace::nullspace_of(const Matrix& sym_psd, double rank_tol) {
  if (sym_psd.rows() != sym_psd.cols()) {
    fail(ErrorKind::DimensionMismatch, "nullspace_of needs a square matrix");
  }
  const int d = static_cast<int>(sym_psd.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(
      0.5 * (sym_psd + sym_psd.transpose()));
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::EigensolverFailure, "nullspace eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = rank_threshold(
      std::max(std::abs(lambda(0)), std::abs(lambda(d - 1))), rank_tol);
  int count = 0;  // eigenvalues are ascending
  while (count < d && std::abs(lambda(count)) <= cutoff) ++count;
  return Subspace(d, eig.eigenvectors().leftCols(count));
}

void Subspace::require_same_ambient(const Subspace& other) const {
  if (ambient_ != other.ambient_) {
    std::ostringstream msg;
    msg << "ambient dimensions differ: " << ambient_ << " vs "
        << other.ambient_;
    fail(ErrorKind::AmbientMismatch, msg.str());
  }
}

Subspace Subspace::sum(const Subspace& other, double rank_tol) const {
  require_same_ambient(other);
  Matrix joined(ambient_, basis_.cols() + other.basis_.cols());
  joined << basis_, other.basis_;
  return Subspace(ambient_, left_singular_basis(joined, rank_tol));
}

Subspace Subspace::intersect(const Subspace& other, double rank_tol) const {
  require_same_ambient(other);
  if (ambient_ == 0) return zero(0);
  const Matrix eye = Matrix::Identity(ambient_, ambient_);
  Matrix stacked(2 * ambient_, ambient_);
  stacked << eye - projector(), eye - other.projector();
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff =
      rank_threshold(sigma.size() ? sigma(0) : 0.0, rank_tol);
  int rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  return Subspace(ambient_, svd.matrixV().rightCols(ambient_ - rank));
}

double Subspace::membership_residual(const Vector& v) const {
  if (v.size() != ambient_) {
    fail(ErrorKind::AmbientMismatch, "vector/ambient dimension mismatch");
  }
  return (v - basis_ * (basis_.transpose() * v)).norm();
}

bool Subspace::contains(const Vector& v, double tol) const {
  return membership_residual(v) <= tol * std::max(v.norm(), 1.0);
}

bool Subspace::same_as(const Subspace& other, double tol) const {
  if (ambient_ != other.ambient_) return false;
  if (ambient_ == 0) return true;
  return (projector() - other.projector()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace mwc
