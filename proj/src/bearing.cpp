#include "mwc/bearing.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mwc {

MatrixWeight projection_weight(const Vector& bearing, double unit_tol) {
  const double norm = bearing.norm();
  if (std::abs(norm - 1.0) > unit_tol) {
    std::ostringstream msg;
    msg << "bearing must be a unit vector, got norm " << norm;
    fail(ErrorKind::NotUnitVector, msg.str());
  }
  const Vector g = bearing / norm;
  const int d = static_cast<int>(g.size());
  const Matrix p = Matrix::Identity(d, d) - g * g.transpose();
  return MatrixWeight::validated(p);
}

BearingSpec bearings_from_targets(
    const Matrix& targets, const std::vector<std::pair<int, int>>& edges) {
  BearingSpec spec;
  spec.n = static_cast<int>(targets.rows());
  spec.d = static_cast<int>(targets.cols());
  for (const auto& [i, j] : edges) {
    if (i < 0 || i >= spec.n || j < 0 || j >= spec.n || i == j) {
      fail(ErrorKind::ValidationError, "bearing edge out of range");
    }
    Vector diff = (targets.row(j) - targets.row(i)).transpose();
    const double norm = diff.norm();
    if (norm <= 1e-12) {
      std::ostringstream msg;
      msg << "target positions of agents " << i << " and " << j
          << " coincide; bearing undefined";
      fail(ErrorKind::ValidationError, msg.str());
    }
    spec.bearings.push_back({i, j, diff / norm});
  }
  return spec;
}

MatrixWeightedGraph bearing_graph(const BearingSpec& spec) {
  if (spec.d < 2) {
    fail(ErrorKind::ValidationError,
         "bearing constraints need dimension >= 2");
  }
  std::map<std::pair<int, int>, Vector> directed;
  for (const auto& b : spec.bearings) {
    if (b.i < 0 || b.i >= spec.n || b.j < 0 || b.j >= spec.n || b.i == b.j) {
      fail(ErrorKind::ValidationError, "bearing pair out of range");
    }
    if (b.direction.size() != spec.d) {
      fail(ErrorKind::DimensionMismatch, "bearing dimension mismatch");
    }
    auto [it, fresh] = directed.try_emplace({b.i, b.j}, b.direction);
    if (!fresh && (it->second - b.direction).norm() > 1e-10) {
      std::ostringstream msg;
      msg << "conflicting bearings for pair (" << b.i << "," << b.j << ")";
      fail(ErrorKind::InconsistentBearings, msg.str());
    }
  }
  // g_ji must be -g_ij when both directions are present.
  for (const auto& [key, dir] : directed) {
    const auto rev = directed.find({key.second, key.first});
    if (rev != directed.end() && (rev->second + dir).norm() > 1e-10) {
      std::ostringstream msg;
      msg << "bearings for (" << key.first << "," << key.second
          << ") and its reverse are not opposite";
      fail(ErrorKind::InconsistentBearings, msg.str());
    }
  }

  std::vector<std::tuple<int, int, Matrix>> edges;
  for (const auto& [key, dir] : directed) {
    if (key.first > key.second && directed.count({key.second, key.first})) {
      continue;  // already emitted from the other direction
    }
    edges.emplace_back(key.first, key.second,
                       projection_weight(dir).entries());
  }
  return MatrixWeightedGraph::build(spec.n, spec.d, edges);
}

FormationCheck check_formation_state(const BearingSpec& spec,
                                     const MatrixWeightedGraph& g,
                                     const Vector& state,
                                     double residual_tol) {
  const int d = spec.d;
  FormationCheck check;
  for (const auto& b : spec.bearings) {
    const Vector diff =
        state.segment(b.j * d, d) - state.segment(b.i * d, d);
    const Matrix p =
        Matrix::Identity(d, d) - b.direction * b.direction.transpose();
    const double residual =
        (p * diff).norm() / std::max(diff.norm(), 1.0);
    check.max_bearing_residual =
        std::max(check.max_bearing_residual, residual);
  }
  check.laplacian_residual = (g.laplacian() * state).norm();
  check.within_nullspace = check.max_bearing_residual <= residual_tol &&
                           check.laplacian_residual <= residual_tol;
  return check;
}

FormationResult formation_converges_to(const BearingSpec& spec,
                                       const Vector& x0,
                                       const SimulationConfig& cfg,
                                       double residual_tol) {
  const MatrixWeightedGraph g = bearing_graph(spec);
  FormationResult result;
  result.trajectory = simulate(g, x0, cfg);
  result.check = check_formation_state(spec, g, result.trajectory.final_state,
                                       residual_tol);
  return result;
}

}  // namespace mwc
