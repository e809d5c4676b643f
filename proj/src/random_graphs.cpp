#include "mwc/random_graphs.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <numeric>

namespace mwc {

namespace {

bool spectrum_is_ambiguous(const MatrixWeightedGraph& g, double band_below,
                           double band_above) {
  const Matrix l = g.laplacian();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (l + l.transpose()),
                                            Eigen::EigenvaluesOnly);
  const Vector& lambda = eig.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  const double thr = rank_threshold(scale);
  for (int k = 0; k < lambda.size(); ++k) {
    const double v = std::abs(lambda(k));
    if (v > thr / band_below && v < thr * band_above) return true;
  }
  return false;
}

MatrixWeightedGraph draw_graph(SplitMix64& rng,
                               const RandomGraphParams& params) {
  const int n = rng.uniform_int(params.min_n, params.max_n);
  const int d = rng.uniform_int(params.min_d, params.max_d);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = n - 1; k > 0; --k) {
    std::swap(order[k], order[rng.uniform_int(0, k)]);
  }

  std::vector<std::tuple<int, int, Matrix>> edges;
  std::vector<std::vector<char>> present(n, std::vector<char>(n, 0));
  for (int k = 1; k < n; ++k) {
    const int a = order[k];
    const int b = order[rng.uniform_int(0, k - 1)];
    edges.emplace_back(a, b, random_weight(rng, d, params));
    present[a][b] = present[b][a] = 1;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!present[i][j] && rng.uniform() < params.extra_edge_prob) {
        edges.emplace_back(i, j, random_weight(rng, d, params));
      }
    }
  }
  return MatrixWeightedGraph::build(n, d, edges);
}

}  // namespace

Matrix random_weight(SplitMix64& rng, int d, const RandomGraphParams& params) {
  Vector eigenvalues(d);
  for (int k = 0; k < d; ++k) {
    eigenvalues(k) = rng.uniform(params.min_eigenvalue, params.max_eigenvalue);
  }
  if (d > 1) {
    switch (rng.uniform_int(0, 2)) {
      case 0:  // definite
        break;
      case 1:  // semidefinite: one zero eigenvalue
        eigenvalues(0) = 0.0;
        break;
      default:  // rank 1
        for (int k = 0; k + 1 < d; ++k) eigenvalues(k) = 0.0;
        break;
    }
  }
  Matrix gauss(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) gauss(r, c) = rng.gaussian();
  }
  const Matrix q = Eigen::HouseholderQR<Matrix>(gauss).householderQ();
  return q * eigenvalues.asDiagonal() * q.transpose();
}

MatrixWeightedGraph random_graph(SplitMix64& rng,
                                 const RandomGraphParams& params) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    MatrixWeightedGraph g = draw_graph(rng, params);
    if (!params.well_conditioned ||
        !spectrum_is_ambiguous(g, params.band_below, params.band_above)) {
      return g;
    }
  }
  return draw_graph(rng, params);
}

Vector random_initial_state(SplitMix64& rng, int n, int d, double lo,
                            double hi) {
  Vector x(n * d);
  for (int k = 0; k < n * d; ++k) x(k) = rng.uniform(lo, hi);
  return x;
}

}  // namespace mwc
