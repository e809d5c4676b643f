#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mwc/bearing.hpp"
#include "mwc/dynamics.hpp"
#include "mwc/graph.hpp"

namespace mwc {

/// A self-contained experiment description loaded from a JSON file.
/// Agent ids in files are 1-based (matching the usual agent numbering);
/// the in-memory graph is 0-based.
///
/// Schema:
///   {
///     "name": "...", "n": 4, "d": 3,
///     "edges": [{"i": 1, "j": 2, "weight": [[...], ...]}, ...],
///     "initial_states": [[...d values], ...n rows],   // optional
///     "bearings": {"targets": [[...]], "edges": [[1,2], ...]}
///        or {"vectors": [{"i":1, "j":2, "g": [...]}]},  // optional
///     "sim": {"step": ..., "horizon": ..., "convergence_tol": ...},
///     "seed": 42
///   }
/// Either "edges" or "bearings" defines the graph, not both. A seed is
/// required whenever initial_states is absent so every run is replayable.
struct Scenario {
  struct EdgeEntry {
    int i = 0;  // 1-based in files
    int j = 0;
    Matrix weight;
  };

  struct BearingSection {
    std::optional<Matrix> targets;                  // n x d
    std::vector<std::pair<int, int>> target_edges;  // 1-based
    std::vector<BearingConstraint> vectors;         // 1-based ids
  };

  std::string name;
  int n = 0;
  int d = 0;
  std::vector<EdgeEntry> edges;
  std::optional<Matrix> initial_states;  // n x d
  std::optional<BearingSection> bearing;
  SimulationConfig sim;
  std::optional<std::uint64_t> seed;

  static Scenario load(const std::filesystem::path& file);
  static Scenario from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void save(const std::filesystem::path& file) const;

  bool is_bearing() const { return bearing.has_value(); }

  /// Bearing spec with 0-based ids (bearing scenarios only).
  BearingSpec bearing_spec() const;

  MatrixWeightedGraph to_graph(double sym_tol = kSymTol,
                               double psd_tol = kRankTol) const;

  /// Supplied initial states, or seeded uniform draws in [-5, 5]^d.
  Vector initial_state_vector(
      std::optional<std::uint64_t> seed_override = {}) const;
};

/// CSV with header t,x1_1,...,xn_d and 17-significant-digit values, so a
/// seeded run reproduces byte-identical files.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& file,
                          const Trajectory& traj);

}  // namespace mwc
