#pragma once

#include "mwc/graph.hpp"
#include "mwc/subspace.hpp"

namespace mwc {

/// Full symmetric eigendecomposition of the matrix-weighted Laplacian.
/// The Laplacian of a graph on n vertices in dimension d always has at
/// least d zero eigenvalues (the consensus space 1_n (x) I_d lies in its
/// nullspace); consensus is predicted exactly when there are no more.
struct SpectralReport {
  Vector eigenvalues;       // ascending, size dn
  int nullspace_dim = 0;    // eigenvalues at or below the rank threshold
  double lambda_d_plus_1 = 0.0;  // smallest positive eigenvalue, 0 if none
  bool consensus_predicted = false;  // nullspace_dim == d
  Matrix nullspace_basis;   // dn x nullspace_dim, orthonormal
};

SpectralReport analyze_spectrum(const MatrixWeightedGraph& g,
                                double rank_tol = kRankTol);

/// Nullspace of the Laplacian as a Subspace of R^dn.
Subspace laplacian_nullspace(const MatrixWeightedGraph& g,
                             double rank_tol = kRankTol);

/// lambda_{d+1}: the convergence-rate index of the consensus protocol.
/// Defined only when consensus is predicted; throws NotConsensusGraph
/// otherwise (the clustered case has no rate index).
double convergence_rate(const MatrixWeightedGraph& g,
                        double rank_tol = kRankTol);

}  // namespace mwc
