#include "mwc/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mwc/spectral.hpp"

namespace mwc {

namespace {

Vector block_average(const Vector& x, int n, int d) {
  Vector avg = Vector::Zero(d);
  for (int i = 0; i < n; ++i) avg += x.segment(i * d, d);
  return avg / n;
}

}  // namespace

Vector Trajectory::average_at(std::size_t sample) const {
  return block_average(states.at(sample), n, d);
}

Trajectory simulate(const MatrixWeightedGraph& g, const Vector& x0,
                    const SimulationConfig& cfg) {
  const int size = g.state_size();
  if (x0.size() != size) {
    std::ostringstream msg;
    msg << "initial state length " << x0.size() << " != dn = " << size;
    fail(ErrorKind::DimensionMismatch, msg.str());
  }
  if (cfg.horizon == 0.0) {
    Trajectory still;
    still.n = g.vertex_count();
    still.d = g.dimension();
    still.times.push_back(0.0);
    still.states.push_back(x0);
    still.final_state = x0;
    return still;
  }

  const Matrix laplacian = g.laplacian();
  const Matrix l = 0.5 * (laplacian + laplacian.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(l, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::EigensolverFailure, "Laplacian eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  const double lambda_max = std::max(lambda.maxCoeff(), 0.0);
  const double cutoff = rank_threshold(lambda_max);
  double lambda_min_pos = 0.0;
  for (int k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > cutoff) {
      lambda_min_pos = lambda(k);
      break;
    }
  }

  // Stability bound 2/lambda_max with safety factor 0.5 gates explicit
  // steps; the automatic step halves it again to keep the per-mode decay
  // rate of the scheme within 0.1% of the exact one.
  const double step_cap =
      lambda_max > 0.0 ? 1.0 / lambda_max
                       : std::numeric_limits<double>::infinity();
  double step = cfg.step;
  if (step <= 0.0) {
    step = std::isfinite(step_cap) ? 0.5 * step_cap : 0.01;
  } else if (step > step_cap) {
    std::ostringstream msg;
    msg << "step " << step << " exceeds the stability bound " << step_cap
        << " (= 0.5 * 2 / lambda_max)";
    fail(ErrorKind::StepTooLarge, msg.str());
  }

  double horizon = cfg.horizon;
  if (horizon < 0.0) {
    // Long enough for the slowest mode to decay far below convergence_tol.
    horizon = lambda_min_pos > 0.0 ? 40.0 / lambda_min_pos : 10.0 * step;
  }
  horizon = std::max(horizon, step);

  // Hard cap: pathological spectra (tiny positive eigenvalues) would
  // otherwise request billions of steps; convergence usually stops runs
  // far earlier.
  const long total_steps =
      std::min<long>(20'000'000, std::llround(std::ceil(horizon / step)));
  int stride = cfg.record_stride;
  if (stride <= 0) {
    stride = static_cast<int>(std::max<long>(1, total_steps / 2000));
  }

  Trajectory traj;
  traj.n = g.vertex_count();
  traj.d = g.dimension();
  traj.step_used = step;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  Vector x = x0;
  Vector k1(size), k2(size), k3(size), k4(size), next(size);
  double t = 0.0;
  for (long s = 0; s < total_steps; ++s) {
    k1.noalias() = -(l * x);
    k2.noalias() = -(l * (x + (0.5 * step) * k1));
    k3.noalias() = -(l * (x + (0.5 * step) * k2));
    k4.noalias() = -(l * (x + step * k3));
    next = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double rate = (next - x).norm() / step;
    x = next;
    t += step;
    const bool done = rate <= cfg.convergence_tol;
    if ((s + 1) % stride == 0 || done || s + 1 == total_steps) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
    if (done) {
      traj.converged = true;
      break;
    }
  }

  traj.final_state = x;
  traj.final_time = t;
  return traj;
}

double check_average_invariance(const Trajectory& traj) {
  if (traj.states.empty()) {
    fail(ErrorKind::ValidationError, "empty trajectory");
  }
  const Vector avg0 = traj.average_at(0);
  double worst = 0.0;
  for (std::size_t s = 1; s < traj.states.size(); ++s) {
    worst = std::max(worst, (traj.average_at(s) - avg0).norm());
  }
  return worst;
}

std::vector<std::vector<int>> detect_clusters_from_states(
    const Vector& final_state, int d, double group_tol) {
  if (d < 1 || final_state.size() % d != 0) {
    fail(ErrorKind::DimensionMismatch, "state length not a multiple of d");
  }
  const int n = static_cast<int>(final_state.size()) / d;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dist =
          (final_state.segment(i * d, d) - final_state.segment(j * d, d))
              .norm();
      if (dist <= group_tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> root_to_group(n, -1);
  for (int v = 0; v < n; ++v) {
    const int root = find(v);
    if (root_to_group[root] < 0) {
      root_to_group[root] = static_cast<int>(groups.size());
      groups.push_back({});
    }
    groups[root_to_group[root]].push_back(v);
  }
  return groups;
}

EquilibriumReport verify_equilibrium_constraints(
    const MatrixWeightedGraph& g,
    const std::vector<std::vector<int>>& clusters,
    const std::vector<Vector>& cluster_states, const Vector& xbar0,
    int max_paths) {
  if (clusters.size() != cluster_states.size()) {
    fail(ErrorKind::DimensionMismatch,
         "clusters and cluster_states differ in length");
  }
  const int n = g.vertex_count();
  const int d = g.dimension();

  EquilibriumReport report;
  report.clusters = clusters;
  report.cluster_states = cluster_states;

  Vector weighted = Vector::Zero(d);
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    weighted += static_cast<double>(clusters[a].size()) * cluster_states[a];
  }
  const Vector target = static_cast<double>(n) * xbar0;
  report.mass_balance_residual =
      (weighted - target).norm() / std::max(target.norm(), 1.0);

  // Pairwise difference constraints: intersect the nullspaces of the
  // simple paths from each member of one cluster into the other. The true
  // constraint intersects over even more paths, so a membership pass here
  // is conservative in the right direction.
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      Subspace inter = Subspace::full(d);
      int path_count = 0;
      bool truncated = false;
      for (int v : clusters[a]) {
        PathFamily family = enumerate_paths(g, v, clusters[b], max_paths);
        truncated |= family.truncated;
        path_count += static_cast<int>(family.paths.size());
        for (const auto& ns : family.nullspaces) {
          inter = inter.intersect(ns);
        }
      }
      if (path_count == 0) continue;
      const Vector diff = cluster_states[a] - cluster_states[b];
      report.difference_residuals.push_back(
          {static_cast<int>(a), static_cast<int>(b),
           inter.membership_residual(diff), path_count, truncated});
    }
  }
  return report;
}

EquilibriumReport analyze_equilibrium(const MatrixWeightedGraph& g,
                                      const Trajectory& traj,
                                      double group_tol, int max_paths) {
  if (!traj.converged) {
    fail(ErrorKind::NotConverged,
         "equilibrium analysis requires a converged run");
  }
  const auto clusters =
      detect_clusters_from_states(traj.final_state, traj.d, group_tol);
  std::vector<Vector> states;
  states.reserve(clusters.size());
  for (const auto& c : clusters) {
    Vector mean = Vector::Zero(traj.d);
    for (int v : c) mean += traj.final_state.segment(v * traj.d, traj.d);
    states.push_back(mean / static_cast<double>(c.size()));
  }
  return verify_equilibrium_constraints(g, clusters, states,
                                        traj.average_at(0), max_paths);
}

DecayFit measure_decay_rate(const Trajectory& traj,
                            const MatrixWeightedGraph& g, double rank_tol) {
  const SpectralReport spectrum = analyze_spectrum(g, rank_tol);
  if (!spectrum.consensus_predicted) {
    fail(ErrorKind::NotConsensusGraph,
         "decay rate is defined for consensus-predicted graphs only");
  }
  if (traj.states.empty()) {
    fail(ErrorKind::ValidationError, "empty trajectory");
  }

  const int n = traj.n;
  const int d = traj.d;
  const Vector xbar0 = traj.average_at(0);
  std::vector<double> ts, logs;
  const double delta0 = [&] {
    Vector delta = traj.states.front();
    for (int i = 0; i < n; ++i) delta.segment(i * d, d) -= xbar0;
    return delta.norm();
  }();
  if (delta0 <= 1e-12) {
    return {.rate = 0.0, .sample_count = 0, .degenerate = true};
  }
  const double floor = std::max(delta0 * 1e-6, 1e-13);
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    Vector delta = traj.states[s];
    for (int i = 0; i < n; ++i) delta.segment(i * d, d) -= xbar0;
    const double norm = delta.norm();
    if (norm < floor) break;
    ts.push_back(traj.times[s]);
    logs.push_back(std::log(norm));
  }
  if (ts.size() < 3) {
    return {.rate = 0.0, .sample_count = static_cast<int>(ts.size()),
            .degenerate = true};
  }

  const double count = static_cast<double>(ts.size());
  const double t_mean = std::accumulate(ts.begin(), ts.end(), 0.0) / count;
  const double l_mean = std::accumulate(logs.begin(), logs.end(), 0.0) / count;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    num += (ts[k] - t_mean) * (logs[k] - l_mean);
    den += (ts[k] - t_mean) * (ts[k] - t_mean);
  }
  if (den <= 0.0) {
    return {.rate = 0.0, .sample_count = static_cast<int>(ts.size()),
            .degenerate = true};
  }
  return {.rate = num / den, .sample_count = static_cast<int>(ts.size()),
          .degenerate = false};
}

}  // namespace mwc
