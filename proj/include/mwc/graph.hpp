#pragma once

#include <tuple>
#include <vector>

#include "mwc/matrix_weight.hpp"
#include "mwc/types.hpp"

namespace mwc {

/// Undirected edge with i < j. The orientation convention for the incidence
/// matrix is tail = i (the lower vertex index).
struct WeightedEdge {
  int i;
  int j;
  MatrixWeight weight;
};

/// An undirected graph on n vertices whose edges carry d x d symmetric
/// positive-semidefinite matrix weights. Vertices are 0-based. Edges are
/// stored once per unordered pair, in lexicographic (i, j) order, which
/// fixes the edge indexing k = 0..m-1 used by the incidence factorization.
///
/// Immutable after construction; all matrix assembly is by value.
class MatrixWeightedGraph {
 public:
  /// Validates and builds the graph. Each entry is (i, j, weight) with
  /// 0 <= i, j < n, i != j; the weight must be a d x d symmetric PSD matrix.
  /// A zero matrix is rejected: a missing coupling is expressed by omitting
  /// the edge.
  static MatrixWeightedGraph build(
      int n, int d, const std::vector<std::tuple<int, int, Matrix>>& edges,
      double sym_tol = kSymTol, double psd_tol = kRankTol);

  int vertex_count() const { return n_; }
  int dimension() const { return d_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int state_size() const { return n_ * d_; }

  const std::vector<WeightedEdge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return neighbors_.at(v); }

  /// Pointer to the weight of edge {i, j}, or nullptr when absent.
  const MatrixWeight* weight_between(int i, int j) const;

  /// dn x dn block matrix with A_ij in block (i, j) for every edge and zero
  /// blocks elsewhere.
  Matrix adjacency_matrix() const;

  /// dn x dn Laplacian assembled directly as D - A: degree blocks
  /// sum_{j in N_i} A_ij on the diagonal, -A_ij off-diagonal.
  Matrix laplacian() const;

  /// m x n incidence matrix: row k has +1 at the tail (lower index) and -1
  /// at the head of edge k.
  Matrix incidence_matrix() const;

  /// Laplacian via the factorization (H (x) I_d)^T blkdiag(A_k) (H (x) I_d).
  /// Independent assembly route from laplacian(); the two must agree.
  Matrix laplacian_from_incidence() const;

  /// Edge-sum quadratic form sum_(i,j) (v_i - v_j)^T A_ij (v_i - v_j).
  double quadratic_form(const Vector& v) const;

 private:
  MatrixWeightedGraph(int n, int d, std::vector<WeightedEdge> edges);

  int n_;
  int d_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> edge_index_;  // n x n, -1 when absent
};

}  // namespace mwc
