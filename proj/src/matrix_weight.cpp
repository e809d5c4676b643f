#include "mwc/matrix_weight.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace mwc {

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::PositiveDefinite:
      return "positive-definite";
    case WeightKind::PositiveSemidefinite:
      return "positive-semidefinite";
    case WeightKind::Zero:
      return "zero";
  }
  return "?";
}

MatrixWeight MatrixWeight::validated(const Matrix& raw, double sym_tol,
                                     double psd_tol) {
  if (raw.rows() != raw.cols() || raw.rows() < 1) {
    std::ostringstream msg;
    msg << "weight matrix must be square, got " << raw.rows() << "x"
        << raw.cols();
    fail(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!raw.allFinite()) {
    fail(ErrorKind::ValidationError, "weight matrix has non-finite entries");
  }

  const double asym = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol) {
    std::ostringstream msg;
    msg << "weight matrix is asymmetric: max |A - A^T| = " << asym;
    fail(ErrorKind::AsymmetricWeight, msg.str());
  }

  Matrix sym = 0.5 * (raw + raw.transpose());
  if (sym.isZero(0.0)) {
    return MatrixWeight(std::move(sym), WeightKind::Zero, 0.0, 0.0);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::EigensolverFailure, "eigendecomposition of weight failed");
  }
  const Vector& lambda = eig.eigenvalues();
  const double lo = lambda.minCoeff();
  const double hi = lambda.maxCoeff();
  const double cutoff = rank_threshold(std::max(std::abs(lo), std::abs(hi)),
                                       psd_tol);
  if (lo < -cutoff) {
    std::ostringstream msg;
    msg << "weight matrix is not positive semidefinite: min eigenvalue = "
        << lo;
    fail(ErrorKind::NotPositiveSemidefinite, msg.str());
  }
  const WeightKind kind = (lo > cutoff) ? WeightKind::PositiveDefinite
                                        : WeightKind::PositiveSemidefinite;
  return MatrixWeight(std::move(sym), kind, lo, hi);
}

}  // namespace mwc
