#pragma once

#include <utility>
#include <vector>

#include "mwc/dynamics.hpp"
#include "mwc/graph.hpp"

namespace mwc {

/// Desired unit bearing for the directed pair (i, j): the direction agent j
/// should sit in, as seen from agent i.
struct BearingConstraint {
  int i = 0;
  int j = 0;
  Vector direction;
};

struct BearingSpec {
  int n = 0;
  int d = 0;
  std::vector<BearingConstraint> bearings;
};

/// Orthogonal projector I - g g^T onto the complement of a unit bearing.
/// Rank d-1, idempotent, and its nullspace is span{g}, so as an edge
/// weight it leaves the along-bearing displacement free.
MatrixWeight projection_weight(const Vector& bearing,
                               double unit_tol = 1e-10);

/// Bearings derived from a target configuration (rows of `targets` are
/// agent positions): direction (p_j - p_i) normalized. Coincident targets
/// on an edge are rejected.
BearingSpec bearings_from_targets(
    const Matrix& targets, const std::vector<std::pair<int, int>>& edges);

/// The matrix-weighted graph whose Laplacian is the bearing Laplacian:
/// projector weights on every specified edge. When both directions of a
/// pair are given they must be opposite; conflicting duplicates are
/// rejected.
MatrixWeightedGraph bearing_graph(const BearingSpec& spec);

struct FormationCheck {
  double max_bearing_residual = 0.0;  // worst ||P_g (p_j - p_i)|| over edges,
                                      // relative to max(||p_j - p_i||, 1)
  double laplacian_residual = 0.0;    // ||L_B p_final||
  bool within_nullspace = false;
};

struct FormationResult {
  Trajectory trajectory;
  FormationCheck check;
};

/// Runs the formation law (the consensus protocol with projector weights)
/// and checks that the final state lies in the nullspace of the bearing
/// Laplacian: every edge displacement parallel to its desired bearing.
FormationResult formation_converges_to(const BearingSpec& spec,
                                       const Vector& x0,
                                       const SimulationConfig& cfg = {},
                                       double residual_tol = 1e-6);

/// The nullspace check alone, for a given state.
FormationCheck check_formation_state(const BearingSpec& spec,
                                     const MatrixWeightedGraph& g,
                                     const Vector& state,
                                     double residual_tol = 1e-6);

}  // namespace mwc
