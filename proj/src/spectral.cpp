#include "mwc/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace mwc {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> solve_laplacian(
    const MatrixWeightedGraph& g) {
  const Matrix l = g.laplacian();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (l + l.transpose()));
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::EigensolverFailure,
         "Laplacian eigendecomposition did not converge");
  }
  return eig;
}

int count_null(const Vector& lambda, double rank_tol) {
  const int size = static_cast<int>(lambda.size());
  const double scale =
      std::max(std::abs(lambda(0)), std::abs(lambda(size - 1)));
  const double cutoff = rank_threshold(scale, rank_tol);
  int count = 0;
  while (count < size && std::abs(lambda(count)) <= cutoff) ++count;
  return count;
}

}  // namespace

SpectralReport analyze_spectrum(const MatrixWeightedGraph& g,
                                double rank_tol) {
  const auto eig = solve_laplacian(g);
  SpectralReport report;
  report.eigenvalues = eig.eigenvalues();
  report.nullspace_dim = count_null(report.eigenvalues, rank_tol);
  report.nullspace_basis = eig.eigenvectors().leftCols(report.nullspace_dim);
  report.lambda_d_plus_1 =
      report.nullspace_dim < report.eigenvalues.size()
          ? report.eigenvalues(report.nullspace_dim)
          : 0.0;
  report.consensus_predicted = report.nullspace_dim == g.dimension();
  return report;
}

Subspace laplacian_nullspace(const MatrixWeightedGraph& g, double rank_tol) {
  const auto eig = solve_laplacian(g);
  const int dim = count_null(eig.eigenvalues(), rank_tol);
  return Subspace::span_of(eig.eigenvectors().leftCols(dim), rank_tol);
}

double convergence_rate(const MatrixWeightedGraph& g, double rank_tol) {
  const SpectralReport report = analyze_spectrum(g, rank_tol);
  if (!report.consensus_predicted) {
    std::ostringstream msg;
    msg << "convergence rate undefined: nullspace dimension "
        << report.nullspace_dim << " exceeds d = " << g.dimension();
    fail(ErrorKind::NotConsensusGraph, msg.str());
  }
  return report.lambda_d_plus_1;
}

}  // namespace mwc
