#include "mwc/graph.hpp"

#include <algorithm>
#include <sstream>

namespace mwc {

MatrixWeightedGraph MatrixWeightedGraph::build(
    int n, int d, const std::vector<std::tuple<int, int, Matrix>>& edges,
    double sym_tol, double psd_tol) {
  if (n < 1) fail(ErrorKind::ValidationError, "vertex count must be >= 1");
  if (d < 1) fail(ErrorKind::ValidationError, "state dimension must be >= 1");

  std::vector<WeightedEdge> validated;
  validated.reserve(edges.size());
  for (const auto& [a, b, raw] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      std::ostringstream msg;
      msg << "edge (" << a << "," << b << ") out of range for n = " << n;
      fail(ErrorKind::ValidationError, msg.str());
    }
    if (a == b) {
      std::ostringstream msg;
      msg << "self-loop at vertex " << a;
      fail(ErrorKind::SelfLoop, msg.str());
    }
    if (raw.rows() != d || raw.cols() != d) {
      std::ostringstream msg;
      msg << "edge (" << a << "," << b << ") weight is " << raw.rows() << "x"
          << raw.cols() << ", expected " << d << "x" << d;
      fail(ErrorKind::DimensionMismatch, msg.str());
    }
    MatrixWeight w = MatrixWeight::validated(raw, sym_tol, psd_tol);
    if (w.kind() == WeightKind::Zero) {
      std::ostringstream msg;
      msg << "edge (" << a << "," << b
          << ") has a zero weight; omit the edge instead";
      fail(ErrorKind::ValidationError, msg.str());
    }
    validated.push_back(
        WeightedEdge{std::min(a, b), std::max(a, b), std::move(w)});
  }

  std::sort(validated.begin(), validated.end(),
            [](const WeightedEdge& x, const WeightedEdge& y) {
              return std::tie(x.i, x.j) < std::tie(y.i, y.j);
            });
  for (std::size_t k = 1; k < validated.size(); ++k) {
    if (validated[k - 1].i == validated[k].i &&
        validated[k - 1].j == validated[k].j) {
      std::ostringstream msg;
      msg << "duplicate edge (" << validated[k].i << "," << validated[k].j
          << ")";
      fail(ErrorKind::DuplicateEdge, msg.str());
    }
  }
  return MatrixWeightedGraph(n, d, std::move(validated));
}

MatrixWeightedGraph::MatrixWeightedGraph(int n, int d,
                                         std::vector<WeightedEdge> edges)
    : n_(n), d_(d), edges_(std::move(edges)), neighbors_(n),
      edge_index_(n, std::vector<int>(n, -1)) {
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    neighbors_[e.i].push_back(e.j);
    neighbors_[e.j].push_back(e.i);
    edge_index_[e.i][e.j] = static_cast<int>(k);
    edge_index_[e.j][e.i] = static_cast<int>(k);
  }
  for (auto& nbrs : neighbors_) std::sort(nbrs.begin(), nbrs.end());
}

const MatrixWeight* MatrixWeightedGraph::weight_between(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j) return nullptr;
  const int k = edge_index_[i][j];
  return k < 0 ? nullptr : &edges_[k].weight;
}

Matrix MatrixWeightedGraph::adjacency_matrix() const {
  Matrix a = Matrix::Zero(n_ * d_, n_ * d_);
  for (const auto& e : edges_) {
    a.block(e.i * d_, e.j * d_, d_, d_) = e.weight.entries();
    a.block(e.j * d_, e.i * d_, d_, d_) = e.weight.entries();
  }
  return a;
}

Matrix MatrixWeightedGraph::laplacian() const {
  Matrix l = Matrix::Zero(n_ * d_, n_ * d_);
  for (const auto& e : edges_) {
    const Matrix& w = e.weight.entries();
    l.block(e.i * d_, e.i * d_, d_, d_) += w;
    l.block(e.j * d_, e.j * d_, d_, d_) += w;
    l.block(e.i * d_, e.j * d_, d_, d_) -= w;
    l.block(e.j * d_, e.i * d_, d_, d_) -= w;
  }
  return l;
}

Matrix MatrixWeightedGraph::incidence_matrix() const {
  Matrix h = Matrix::Zero(edge_count(), n_);
  for (int k = 0; k < edge_count(); ++k) {
    h(k, edges_[k].i) = 1.0;   // tail = lower vertex index
    h(k, edges_[k].j) = -1.0;
  }
  return h;
}

Matrix MatrixWeightedGraph::laplacian_from_incidence() const {
  const int m = edge_count();
  const Matrix h = incidence_matrix();
  Matrix hbar = Matrix::Zero(m * d_, n_ * d_);
  for (int k = 0; k < m; ++k) {
    for (int v = 0; v < n_; ++v) {
      if (h(k, v) != 0.0) {
        hbar.block(k * d_, v * d_, d_, d_) =
            h(k, v) * Matrix::Identity(d_, d_);
      }
    }
  }
  Matrix blk = Matrix::Zero(m * d_, m * d_);
  for (int k = 0; k < m; ++k) {
    blk.block(k * d_, k * d_, d_, d_) = edges_[k].weight.entries();
  }
  return hbar.transpose() * blk * hbar;
}

double MatrixWeightedGraph::quadratic_form(const Vector& v) const {
  if (v.size() != state_size()) {
    std::ostringstream msg;
    msg << "vector length " << v.size() << " != dn = " << state_size();
    fail(ErrorKind::DimensionMismatch, msg.str());
  }
  double total = 0.0;
  for (const auto& e : edges_) {
    const Vector diff = v.segment(e.i * d_, d_) - v.segment(e.j * d_, d_);
    total += diff.dot(e.weight.entries() * diff);
  }
  return total;
}

}  // namespace mwc
