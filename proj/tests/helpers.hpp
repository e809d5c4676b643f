#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <tuple>
#include <vector>

#include "mwc/graph.hpp"

namespace mwc::test {

inline Matrix diag3(double a, double b, double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

inline Matrix m22(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

/// Four agents in R^3: one definite edge (1,4) and three semidefinite ones.
/// Converges to the two-cluster split {1,2,4} | {3}.
inline MatrixWeightedGraph example1_graph() {
  std::vector<std::tuple<int, int, Matrix>> edges{
      {0, 1, diag3(0, 1, 1)},
      {0, 2, diag3(1, 0, 0)},
      {1, 2, diag3(1, 0, 1)},
      {0, 3, diag3(1, 2, 1)},
  };
  return MatrixWeightedGraph::build(4, 3, edges);
}

/// Nine agents in R^2 wired into three positive groups bridged by rank-1
/// couplings; with_bridge adds the (2,8) coupling that collapses everything
/// into one spanning cluster.
inline MatrixWeightedGraph cluster9_graph(bool with_bridge) {
  const double s = std::sqrt(3.0) / 4.0;
  const double o = std::sqrt(0.9518 * 0.0482);
  std::vector<std::tuple<int, int, Matrix>> edges{
      {0, 1, m22(2, 0, 0, 1)},
      {0, 2, m22(2, 3, 3, 5)},
      {3, 6, m22(0, 0, 0, 1)},
      {0, 3, m22(0.75, -s, -s, 0.25)},
      {0, 6, m22(0.75, s, s, 0.25)},
      {3, 4, m22(1, 0.5, 0.5, 1)},
      {3, 5, m22(0.9518, -o, -o, 0.0482)},
      {4, 5, m22(1, 0, 0, 0)},
      {6, 7, m22(3, 2, 2, 3)},
      {7, 8, m22(2, 0, 0, 2)},
  };
  if (with_bridge) edges.emplace_back(1, 7, m22(0, 0, 0, 1));
  return MatrixWeightedGraph::build(9, 2, edges);
}

/// Independent Laplacian assembly: per-vertex degree sums minus adjacency,
/// written element-wise without reusing the library's block loops.
inline Matrix laplacian_oracle(const MatrixWeightedGraph& g) {
  const int n = g.vertex_count();
  const int d = g.dimension();
  Matrix l = Matrix::Zero(n * d, n * d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const MatrixWeight* w = g.weight_between(i, j);
      if (!w) continue;
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          l(i * d + r, i * d + c) += w->entries()(r, c);
          l(i * d + r, j * d + c) -= w->entries()(r, c);
        }
      }
    }
  }
  return l;
}

inline int svd_rank(const Matrix& m, double tol = kRankTol) {
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0) return 0;
  const double cutoff = rank_threshold(sigma(0), tol);
  int rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  return rank;
}

/// Orthogonal projector onto the Laplacian nullspace, assembled in test
/// code; x(t) -> P x(0), which makes exact limits available to tests.
inline Matrix nullspace_projector_oracle(const MatrixWeightedGraph& g) {
  const Matrix l = g.laplacian();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (l + l.transpose()));
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = rank_threshold(
      std::max(std::abs(lambda(0)), std::abs(lambda(lambda.size() - 1))));
  Matrix p = Matrix::Zero(l.rows(), l.cols());
  for (int k = 0; k < lambda.size(); ++k) {
    if (std::abs(lambda(k)) <= cutoff) {
      p += eig.eigenvectors().col(k) * eig.eigenvectors().col(k).transpose();
    }
  }
  return p;
}

inline bool matrix_close(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace mwc::test
