#include "mwc/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mwc/rng.hpp"

namespace mwc {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& context,
                             const std::string& what) {
  fail(ErrorKind::ParseError, context + ": " + what);
}

Matrix matrix_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty()) parse_fail(context, "expected a 2-D array");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    parse_fail(context, "expected a 2-D array");
  }
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      parse_fail(context, "ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) parse_fail(context, "non-numeric entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

int agent_id(const json& j, const std::string& context, int n) {
  if (!j.is_number_integer()) parse_fail(context, "agent id must be integer");
  const int id = j.get<int>();
  if (id < 1 || id > n) {
    std::ostringstream msg;
    msg << "agent id " << id << " outside 1.." << n;
    parse_fail(context, msg.str());
  }
  return id;
}

}  // namespace

Scenario Scenario::from_json(const json& j) {
  Scenario s;
  if (!j.is_object()) parse_fail("scenario", "top level must be an object");
  s.name = j.value("name", std::string("scenario"));
  if (!j.contains("n") || !j.contains("d")) {
    parse_fail(s.name, "missing required fields n and d");
  }
  s.n = j.at("n").get<int>();
  s.d = j.at("d").get<int>();
  if (s.n < 1 || s.d < 1) parse_fail(s.name, "n and d must be >= 1");

  const bool has_edges = j.contains("edges") && !j.at("edges").empty();
  const bool has_bearing = j.contains("bearings");
  if (has_edges && has_bearing) {
    fail(ErrorKind::ValidationError,
         s.name + ": give either edges or bearings, not both");
  }
  if (!has_edges && !has_bearing) {
    fail(ErrorKind::ValidationError,
         s.name + ": one of edges or bearings is required");
  }

  if (has_edges) {
    for (const auto& e : j.at("edges")) {
      EdgeEntry entry;
      entry.i = agent_id(e.at("i"), s.name + "/edges", s.n);
      entry.j = agent_id(e.at("j"), s.name + "/edges", s.n);
      entry.weight = matrix_from_json(e.at("weight"), s.name + "/weight");
      s.edges.push_back(std::move(entry));
    }
  }

  if (has_bearing) {
    const json& b = j.at("bearings");
    BearingSection section;
    if (b.contains("targets")) {
      section.targets = matrix_from_json(b.at("targets"), s.name + "/targets");
      if (section.targets->rows() != s.n || section.targets->cols() != s.d) {
        fail(ErrorKind::ValidationError,
             s.name + ": targets must be an n x d array");
      }
      for (const auto& e : b.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
          parse_fail(s.name, "bearing edges must be [i, j] pairs");
        }
        section.target_edges.emplace_back(
            agent_id(e[0], s.name + "/bearings", s.n),
            agent_id(e[1], s.name + "/bearings", s.n));
      }
    } else if (b.contains("vectors")) {
      for (const auto& e : b.at("vectors")) {
        BearingConstraint c;
        c.i = agent_id(e.at("i"), s.name + "/bearings", s.n);
        c.j = agent_id(e.at("j"), s.name + "/bearings", s.n);
        const auto& g = e.at("g");
        if (!g.is_array() || static_cast<int>(g.size()) != s.d) {
          parse_fail(s.name, "bearing vector must have d entries");
        }
        c.direction = Vector(s.d);
        for (int k = 0; k < s.d; ++k) c.direction(k) = g[k].get<double>();
        section.vectors.push_back(std::move(c));
      }
    } else {
      parse_fail(s.name, "bearings needs either targets+edges or vectors");
    }
    s.bearing = std::move(section);
  }

  if (j.contains("initial_states")) {
    Matrix states = matrix_from_json(j.at("initial_states"),
                                     s.name + "/initial_states");
    if (states.rows() != s.n || states.cols() != s.d) {
      fail(ErrorKind::ValidationError,
           s.name + ": initial_states must be an n x d array");
    }
    s.initial_states = std::move(states);
  }
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (!s.initial_states && !s.seed) {
    fail(ErrorKind::ValidationError,
         s.name + ": a seed is required when initial_states is absent");
  }

  if (j.contains("sim")) {
    const json& sim = j.at("sim");
    s.sim.step = sim.value("step", 0.0);
    s.sim.horizon = sim.value("horizon", -1.0);
    s.sim.convergence_tol = sim.value("convergence_tol", 1e-9);
  }
  return s;
}

Scenario Scenario::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    fail(ErrorKind::ParseError, "cannot open " + file.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, file.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json Scenario::to_json() const {
  json j;
  j["name"] = name;
  j["n"] = n;
  j["d"] = d;
  if (!edges.empty()) {
    json list = json::array();
    for (const auto& e : edges) {
      list.push_back(
          {{"i", e.i}, {"j", e.j}, {"weight", matrix_to_json(e.weight)}});
    }
    j["edges"] = std::move(list);
  }
  if (bearing) {
    json b;
    if (bearing->targets) {
      b["targets"] = matrix_to_json(*bearing->targets);
      json list = json::array();
      for (const auto& [i, jj] : bearing->target_edges) {
        list.push_back({i, jj});
      }
      b["edges"] = std::move(list);
    } else {
      json list = json::array();
      for (const auto& c : bearing->vectors) {
        json g = json::array();
        for (int k = 0; k < c.direction.size(); ++k) {
          g.push_back(c.direction(k));
        }
        list.push_back({{"i", c.i}, {"j", c.j}, {"g", std::move(g)}});
      }
      b["vectors"] = std::move(list);
    }
    j["bearings"] = std::move(b);
  }
  if (initial_states) j["initial_states"] = matrix_to_json(*initial_states);
  if (seed) j["seed"] = *seed;
  if (sim.step > 0.0 || sim.horizon >= 0.0 || sim.convergence_tol != 1e-9) {
    json simj;
    if (sim.step > 0.0) simj["step"] = sim.step;
    if (sim.horizon >= 0.0) simj["horizon"] = sim.horizon;
    simj["convergence_tol"] = sim.convergence_tol;
    j["sim"] = std::move(simj);
  }
  return j;
}

void Scenario::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) fail(ErrorKind::ValidationError, "cannot write " + file.string());
  out << to_json().dump(2) << "\n";
}

BearingSpec Scenario::bearing_spec() const {
  if (!bearing) {
    fail(ErrorKind::ValidationError, name + " has no bearing section");
  }
  if (bearing->targets) {
    std::vector<std::pair<int, int>> zero_based;
    zero_based.reserve(bearing->target_edges.size());
    for (const auto& [i, j] : bearing->target_edges) {
      zero_based.emplace_back(i - 1, j - 1);
    }
    return bearings_from_targets(*bearing->targets, zero_based);
  }
  BearingSpec spec;
  spec.n = n;
  spec.d = d;
  for (const auto& c : bearing->vectors) {
    spec.bearings.push_back({c.i - 1, c.j - 1, c.direction});
  }
  return spec;
}

MatrixWeightedGraph Scenario::to_graph(double sym_tol, double psd_tol) const {
  if (bearing) return bearing_graph(bearing_spec());
  std::vector<std::tuple<int, int, Matrix>> zero_based;
  zero_based.reserve(edges.size());
  for (const auto& e : edges) {
    zero_based.emplace_back(e.i - 1, e.j - 1, e.weight);
  }
  return MatrixWeightedGraph::build(n, d, zero_based, sym_tol, psd_tol);
}

Vector Scenario::initial_state_vector(
    std::optional<std::uint64_t> seed_override) const {
  if (initial_states) {
    Vector x(n * d);
    for (int i = 0; i < n; ++i) {
      x.segment(i * d, d) = initial_states->row(i).transpose();
    }
    return x;
  }
  const std::uint64_t chosen = seed_override ? *seed_override : *seed;
  SplitMix64 rng(chosen);
  Vector x(n * d);
  for (int k = 0; k < n * d; ++k) x(k) = rng.uniform(-5.0, 5.0);
  return x;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (int i = 1; i <= traj.n; ++i) {
    for (int k = 1; k <= traj.d; ++k) out << ",x" << i << "_" << k;
  }
  out << "\n";
  char buffer[40];
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", traj.times[s]);
    out << buffer;
    const Vector& x = traj.states[s];
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", x(k));
      out << "," << buffer;
    }
    out << "\n";
  }
}

void write_trajectory_csv(const std::filesystem::path& file,
                          const Trajectory& traj) {
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(ErrorKind::ValidationError, "cannot write " + file.string());
  write_trajectory_csv(out, traj);
}

}  // namespace mwc
