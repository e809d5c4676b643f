#pragma once

#include <vector>

#include "mwc/clustering.hpp"
#include "mwc/graph.hpp"

namespace mwc {

/// Grouping threshold when reading cluster structure off converged states.
inline constexpr double kDefaultGroupTol = 1e-5;

struct SimulationConfig {
  double step = 0.0;              // seconds; <= 0 selects a stable step
  double horizon = -1.0;          // seconds; < 0 selects from the spectrum,
                                  // 0 records the initial state only
  double convergence_tol = 1e-9;  // on ||x(t+h) - x(t)|| / h
  int record_stride = 0;          // samples every k-th step; <= 0 auto
};

struct Trajectory {
  int n = 0;
  int d = 0;
  std::vector<double> times;
  std::vector<Vector> states;  // always includes t = 0 and the final state
  bool converged = false;
  Vector final_state;
  double final_time = 0.0;
  double step_used = 0.0;

  Vector average_at(std::size_t sample) const;
};

/// Integrates x' = -L x with the classical fixed-step fourth-order scheme.
/// An explicit step above the stability bound (2 / lambda_max with safety
/// factor 0.5) raises StepTooLarge; the automatic step stays well under it.
/// `converged` is set when the state-change rate drops below
/// convergence_tol before the horizon.
Trajectory simulate(const MatrixWeightedGraph& g, const Vector& x0,
                    const SimulationConfig& cfg = {});

/// Max over recorded samples of ||xbar(t) - xbar(0)||; the protocol keeps
/// the average invariant, so this is an integration-quality measure.
double check_average_invariance(const Trajectory& traj);

/// Transitive closure of the pairwise grouping ||x_i - x_j|| <= group_tol
/// over the agents' final states.
std::vector<std::vector<int>> detect_clusters_from_states(
    const Vector& final_state, int d, double group_tol = kDefaultGroupTol);

struct ClusterPairResidual {
  int a = 0;
  int b = 0;
  double residual = 0.0;    // distance of the state difference from the
                            // intersection of connecting path nullspaces
  int path_count = 0;
  bool truncated = false;
};

struct EquilibriumReport {
  std::vector<std::vector<int>> clusters;
  std::vector<Vector> cluster_states;
  double mass_balance_residual = 0.0;  // weighted cluster states vs average
  std::vector<ClusterPairResidual> difference_residuals;
};

/// Checks the equilibrium constraints: the cluster-size-weighted sum of
/// cluster states equals n * xbar(0), and each pair of connected clusters
/// differs by a vector inside the intersection of the nullspaces of the
/// paths joining them.
EquilibriumReport verify_equilibrium_constraints(
    const MatrixWeightedGraph& g,
    const std::vector<std::vector<int>>& clusters,
    const std::vector<Vector>& cluster_states, const Vector& xbar0,
    int max_paths = kDefaultMaxPaths);

/// Convenience pipeline for a finished run: detect clusters, average their
/// states and verify the constraints. Throws NotConverged on an unfinished
/// trajectory.
EquilibriumReport analyze_equilibrium(const MatrixWeightedGraph& g,
                                      const Trajectory& traj,
                                      double group_tol = kDefaultGroupTol,
                                      int max_paths = kDefaultMaxPaths);

struct DecayFit {
  double rate = 0.0;      // least-squares slope of log ||delta(t)||
  int sample_count = 0;
  bool degenerate = false;  // no usable window (e.g. x0 in consensus space)
};

/// Fits the exponential decay rate of the disagreement ||x - 1 (x) xbar||
/// over the pre-convergence window. Only defined for consensus-predicted
/// graphs (throws NotConsensusGraph otherwise); the fitted rate is at most
/// -lambda_{d+1} up to integration error.
DecayFit measure_decay_rate(const Trajectory& traj,
                            const MatrixWeightedGraph& g,
                            double rank_tol = kRankTol);

}  // namespace mwc
