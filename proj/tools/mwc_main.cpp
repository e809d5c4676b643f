// Command-line front end: scenario analysis, protocol simulation, spectrum
// listings and cross-check verification for matrix-weighted consensus
// networks. Exit codes: 0 success/agreement, 1 validation failure,
// 2 prediction disagreement.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "mwc/bearing.hpp"
#include "mwc/clustering.hpp"
#include "mwc/dynamics.hpp"
#include "mwc/random_graphs.hpp"
#include "mwc/scenario.hpp"
#include "mwc/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDisagreement = 2;

struct Options {
  std::string scenario_file;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
  int max_paths = mwc::kDefaultMaxPaths;
  double tol = mwc::kRankTol;
  bool print_basis = false;
  // verify --random
  bool random_mode = false;
  std::vector<std::uint64_t> random_args;  // n d seed count
};

std::string sci(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3e", value);
  return buffer;
}

std::vector<int> to_labels(const std::vector<int>& zero_based) {
  std::vector<int> labels(zero_based.size());
  std::transform(zero_based.begin(), zero_based.end(), labels.begin(),
                 [](int v) { return v + 1; });
  return labels;
}

std::string label_set(const std::vector<int>& zero_based) {
  std::ostringstream out;
  out << "{";
  for (std::size_t k = 0; k < zero_based.size(); ++k) {
    out << (k ? "," : "") << zero_based[k] + 1;
  }
  out << "}";
  return out.str();
}

json partition_json(const std::vector<std::vector<int>>& clusters) {
  json list = json::array();
  for (const auto& c : clusters) list.push_back(to_labels(c));
  return list;
}

json merge_trace_json(const std::vector<mwc::MergeStep>& merges) {
  json list = json::array();
  for (const auto& step : merges) {
    json entry;
    entry["rule"] = mwc::to_string(step.rule);
    entry["into"] = to_labels(step.into);
    entry["absorbed"] = to_labels(step.absorbed);
    if (step.witness >= 0) entry["witness"] = step.witness + 1;
    if (!step.edges_used.empty()) {
      json edges = json::array();
      for (const auto& [i, j] : step.edges_used) {
        edges.push_back({i + 1, j + 1});
      }
      entry["edges"] = std::move(edges);
    }
    list.push_back(std::move(entry));
  }
  return list;
}

struct AnalysisResult {
  mwc::SpectralReport spectrum;
  mwc::ClusterPartition partition;
  bool agreement = false;
  json report;
};

AnalysisResult run_analysis(const mwc::MatrixWeightedGraph& g,
                            const Options& opt) {
  AnalysisResult result;
  result.spectrum = mwc::analyze_spectrum(g, opt.tol);
  result.partition = mwc::find_clusters(g, opt.max_paths, opt.tol);
  result.agreement =
      result.partition.spanning == result.spectrum.consensus_predicted;

  json& r = result.report;
  r["n"] = g.vertex_count();
  r["d"] = g.dimension();

  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"i", e.i + 1},
                     {"j", e.j + 1},
                     {"classification", mwc::to_string(e.weight.kind())},
                     {"min_eigenvalue", e.weight.min_eigenvalue()},
                     {"max_eigenvalue", e.weight.max_eigenvalue()}});
  }
  r["edges"] = std::move(edges);

  json trees = json::array();
  for (const auto& tree : mwc::positive_tree_partition(g).trees) {
    trees.push_back(to_labels(tree.vertices));
  }
  r["positive_trees"] = std::move(trees);
  r["merge_trace"] = merge_trace_json(result.partition.merges);
  r["clusters"] = partition_json(result.partition.clusters);
  r["spanning_cluster"] = result.partition.spanning;
  r["truncation_warning"] = result.partition.truncation_warning;
  r["nullspace_dim"] = result.spectrum.nullspace_dim;
  r["consensus_predicted"] = result.spectrum.consensus_predicted;
  if (result.spectrum.consensus_predicted) {
    r["lambda_d_plus_1"] = result.spectrum.lambda_d_plus_1;
  }
  r["agreement"] = result.agreement;
  return result;
}

void print_analysis(const mwc::MatrixWeightedGraph& g,
                    const AnalysisResult& result) {
  std::cout << "edges (" << g.edge_count() << "):\n";
  for (const auto& e : g.edges()) {
    std::cout << "  (" << e.i + 1 << "," << e.j + 1 << ")  "
              << mwc::to_string(e.weight.kind())
              << "  [lambda_min " << e.weight.min_eigenvalue()
              << ", lambda_max " << e.weight.max_eigenvalue() << "]\n";
  }
  std::cout << "positive trees:";
  for (const auto& tree : mwc::positive_tree_partition(g).trees) {
    std::cout << " " << label_set(tree.vertices);
  }
  std::cout << "\nmerge trace:\n";
  if (result.partition.merges.empty()) std::cout << "  (none)\n";
  for (const auto& step : result.partition.merges) {
    std::cout << "  " << label_set(step.into) << " += "
              << label_set(step.absorbed) << " via "
              << mwc::to_string(step.rule);
    if (step.witness >= 0) std::cout << " (witness " << step.witness + 1 << ")";
    std::cout << "\n";
  }
  std::cout << "clusters:";
  for (const auto& c : result.partition.clusters) {
    std::cout << " " << label_set(c);
  }
  std::cout << "\nnullspace dimension: " << result.spectrum.nullspace_dim
            << " (d = " << g.dimension() << ")\n";
  std::cout << "consensus predicted (spectral): "
            << (result.spectrum.consensus_predicted ? "yes" : "no") << "\n";
  std::cout << "spanning cluster (graph): "
            << (result.partition.spanning ? "yes" : "no") << "\n";
  if (result.spectrum.consensus_predicted) {
    std::cout << "lambda_{d+1}: " << result.spectrum.lambda_d_plus_1 << "\n";
  }
  std::cout << "algebraic/graph agreement: "
            << (result.agreement ? "yes" : "NO") << "\n";
}

void write_report(const json& report, const fs::path& file) {
  std::ofstream out(file);
  if (!out) {
    mwc::fail(mwc::ErrorKind::ValidationError,
              "cannot write " + file.string());
  }
  out << report.dump(2) << "\n";
  std::cout << "wrote " << file.string() << "\n";
}

int cmd_analyze(const Options& opt) {
  const mwc::Scenario scenario = mwc::Scenario::load(opt.scenario_file);
  const mwc::MatrixWeightedGraph g =
      scenario.to_graph(mwc::kSymTol, opt.tol);
  AnalysisResult result = run_analysis(g, opt);
  result.report["name"] = scenario.name;
  std::cout << "scenario: " << scenario.name << "\n";
  print_analysis(g, result);
  write_report(result.report,
               fs::path(opt.output_dir) / (scenario.name + "_analysis.json"));
  return result.agreement ? kExitOk : kExitDisagreement;
}

bool same_partition(std::vector<std::vector<int>> a,
                    std::vector<std::vector<int>> b) {
  const auto normalize = [](std::vector<std::vector<int>>& p) {
    for (auto& c : p) std::sort(c.begin(), c.end());
    std::sort(p.begin(), p.end());
  };
  normalize(a);
  normalize(b);
  return a == b;
}

int cmd_simulate(const Options& opt) {
  const mwc::Scenario scenario = mwc::Scenario::load(opt.scenario_file);
  const mwc::MatrixWeightedGraph g =
      scenario.to_graph(mwc::kSymTol, opt.tol);
  const mwc::Vector x0 = scenario.initial_state_vector(opt.seed);
  const mwc::Trajectory traj = mwc::simulate(g, x0, scenario.sim);

  const fs::path csv =
      fs::path(opt.output_dir) / (scenario.name + "_trajectory.csv");
  mwc::write_trajectory_csv(csv, traj);
  std::cout << "wrote " << csv.string() << " (" << traj.states.size()
            << " samples, t_final " << traj.final_time << ", "
            << (traj.converged ? "converged" : "not converged") << ")\n";

  json report;
  report["name"] = scenario.name;
  report["converged"] = traj.converged;
  report["final_time"] = traj.final_time;
  report["step"] = traj.step_used;
  report["average_drift"] = mwc::check_average_invariance(traj);

  const mwc::ClusterPartition predicted =
      mwc::find_clusters(g, opt.max_paths, opt.tol);
  report["predicted_clusters"] = partition_json(predicted.clusters);

  int exit_code = kExitOk;
  if (traj.converged) {
    const mwc::EquilibriumReport eq = mwc::analyze_equilibrium(g, traj);
    report["detected_clusters"] = partition_json(eq.clusters);
    json states = json::array();
    for (const auto& s : eq.cluster_states) {
      json row = json::array();
      for (int k = 0; k < s.size(); ++k) row.push_back(s(k));
      states.push_back(std::move(row));
    }
    report["cluster_states"] = std::move(states);
    report["mass_balance_residual"] = eq.mass_balance_residual;
    json diffs = json::array();
    for (const auto& pr : eq.difference_residuals) {
      diffs.push_back({{"clusters", {pr.a + 1, pr.b + 1}},
                       {"residual", pr.residual},
                       {"paths", pr.path_count}});
    }
    report["difference_residuals"] = std::move(diffs);

    const bool match = same_partition(predicted.clusters, eq.clusters);
    report["prediction_agreement"] = match;
    if (!match) exit_code = kExitDisagreement;
    std::cout << "detected clusters:";
    for (const auto& c : eq.clusters) std::cout << " " << label_set(c);
    std::cout << "\npredicted clusters:";
    for (const auto& c : predicted.clusters) std::cout << " " << label_set(c);
    std::cout << "\nagreement: " << (match ? "yes" : "NO") << "\n";

    const mwc::SpectralReport spectrum = mwc::analyze_spectrum(g, opt.tol);
    if (spectrum.consensus_predicted) {
      const mwc::DecayFit fit = mwc::measure_decay_rate(traj, g, opt.tol);
      report["decay"] = {{"fitted_rate", fit.rate},
                         {"lambda_d_plus_1", spectrum.lambda_d_plus_1},
                         {"samples", fit.sample_count},
                         {"degenerate", fit.degenerate}};
    }
  } else {
    std::cout << "not converged; equilibrium analysis skipped\n";
  }

  write_report(report, fs::path(opt.output_dir) /
                           (scenario.name + "_equilibrium.json"));
  return exit_code;
}

int cmd_spectrum(const Options& opt) {
  const mwc::Scenario scenario = mwc::Scenario::load(opt.scenario_file);
  const mwc::MatrixWeightedGraph g =
      scenario.to_graph(mwc::kSymTol, opt.tol);
  const mwc::SpectralReport spectrum = mwc::analyze_spectrum(g, opt.tol);

  std::cout << "scenario: " << scenario.name << "\n";
  std::cout << "eigenvalues (" << spectrum.eigenvalues.size() << "):\n";
  for (int k = 0; k < spectrum.eigenvalues.size(); ++k) {
    std::cout << "  " << spectrum.eigenvalues(k) << "\n";
  }
  std::cout << "nullspace dimension: " << spectrum.nullspace_dim << "\n";
  if (opt.print_basis) {
    std::cout << "nullspace basis (columns):\n"
              << spectrum.nullspace_basis << "\n";
  }

  json report;
  report["name"] = scenario.name;
  json values = json::array();
  for (int k = 0; k < spectrum.eigenvalues.size(); ++k) {
    values.push_back(spectrum.eigenvalues(k));
  }
  report["eigenvalues"] = std::move(values);
  report["nullspace_dim"] = spectrum.nullspace_dim;
  report["consensus_predicted"] = spectrum.consensus_predicted;
  write_report(report,
               fs::path(opt.output_dir) / (scenario.name + "_spectrum.json"));
  return kExitOk;
}

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
};

int run_verify_graph(const std::string& label,
                     const mwc::MatrixWeightedGraph& g, const mwc::Vector& x0,
                     const mwc::SimulationConfig& cfg, const Options& opt,
                     std::vector<CheckLine>& checks) {
  using mwc::Matrix;
  using mwc::Vector;

  const mwc::SpectralReport spectrum = mwc::analyze_spectrum(g, opt.tol);
  const mwc::ClusterPartition partition =
      mwc::find_clusters(g, opt.max_paths, opt.tol);

  checks.push_back({label + ": spectral/graph consensus agreement",
                    spectrum.consensus_predicted == partition.spanning,
                    "nullspace_dim=" + std::to_string(spectrum.nullspace_dim) +
                        " clusters=" +
                        std::to_string(partition.clusters.size())});

  const Matrix direct = g.laplacian();
  const Matrix factored = g.laplacian_from_incidence();
  const double lap_scale = direct.cwiseAbs().maxCoeff();
  const double lap_residual =
      (direct - factored).cwiseAbs().maxCoeff() / std::max(lap_scale, 1e-300);
  checks.push_back({label + ": Laplacian assembly routes agree",
                    lap_residual <= 1e-12,
                    "relative max deviation " + sci(lap_residual)});

  mwc::SplitMix64 qf_rng(0xabcdef12345ULL);
  double qf_worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Vector v =
        mwc::random_initial_state(qf_rng, g.vertex_count(), g.dimension());
    const double via_edges = g.quadratic_form(v);
    const double via_matrix = v.dot(direct * v);
    qf_worst = std::max(qf_worst, std::abs(via_edges - via_matrix) /
                                      std::max(std::abs(via_matrix), 1.0));
  }
  checks.push_back({label + ": quadratic form matches v'Lv",
                    qf_worst <= 1e-10, "worst relative " +
                        sci(qf_worst)});

  const mwc::Trajectory traj = mwc::simulate(g, x0, cfg);
  const double drift = mwc::check_average_invariance(traj);
  checks.push_back(
      {label + ": average invariant",
       drift <= 1e-8 * std::max(traj.average_at(0).norm(), 1.0),
       "max drift " + sci(drift)});

  bool monotone = true;
  for (std::size_t s = 1; s < traj.states.size(); ++s) {
    if (0.5 * traj.states[s].squaredNorm() >
        0.5 * traj.states[s - 1].squaredNorm() + 1e-10) {
      monotone = false;
      break;
    }
  }
  checks.push_back({label + ": ||x||^2/2 non-increasing", monotone, ""});

  if (traj.converged) {
    const double eq_residual = (direct * traj.final_state).norm();
    checks.push_back({label + ": equilibrium residual ||L x_final||",
                      eq_residual <= 10 * cfg.convergence_tol,
                      sci(eq_residual)});
    const auto detected = mwc::detect_clusters_from_states(
        traj.final_state, g.dimension());
    checks.push_back(
        {label + ": observed clusters match prediction",
         same_partition(partition.clusters, detected),
         "observed " + std::to_string(detected.size()) + ", predicted " +
             std::to_string(partition.clusters.size())});
  } else {
    checks.push_back({label + ": simulation converged", false,
                      "horizon too short"});
  }
  return 0;
}

int cmd_verify(const Options& opt) {
  std::vector<CheckLine> checks;

  if (opt.random_mode) {
    if (opt.random_args.size() != 4) {
      std::cerr << "--random needs N D SEED COUNT\n";
      return kExitValidation;
    }
    const int n = static_cast<int>(opt.random_args[0]);
    const int d = static_cast<int>(opt.random_args[1]);
    const std::uint64_t seed = opt.random_args[2];
    const int count = static_cast<int>(opt.random_args[3]);
    mwc::RandomGraphParams params;
    params.min_n = params.max_n = n;
    params.min_d = params.max_d = d;
    mwc::SplitMix64 rng(seed);
    for (int t = 0; t < count; ++t) {
      const mwc::MatrixWeightedGraph g = mwc::random_graph(rng, params);
      const mwc::Vector x0 =
          mwc::random_initial_state(rng, g.vertex_count(), g.dimension());
      run_verify_graph("random[" + std::to_string(t) + "]", g, x0, {}, opt,
                       checks);
    }
  } else {
    const mwc::Scenario scenario = mwc::Scenario::load(opt.scenario_file);
    const mwc::MatrixWeightedGraph g =
        scenario.to_graph(mwc::kSymTol, opt.tol);
    const mwc::Vector x0 = scenario.initial_state_vector(opt.seed);
    run_verify_graph(scenario.name, g, x0, scenario.sim, opt, checks);
  }

  int failures = 0;
  for (const auto& check : checks) {
    std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name;
    if (!check.detail.empty()) std::cout << "  (" << check.detail << ")";
    std::cout << "\n";
    failures += check.pass ? 0 : 1;
  }
  std::cout << checks.size() - failures << "/" << checks.size()
            << " checks passed\n";
  return failures == 0 ? kExitOk : kExitDisagreement;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-weighted consensus network analysis"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Options opt;
  app.add_option("--output-dir", opt.output_dir, "directory for report files");
  app.add_option("--seed", opt.seed, "override the scenario seed");
  app.add_option("--max-paths", opt.max_paths,
                 "path budget per membership query");
  app.add_option("--tol", opt.tol, "rank / PSD tolerance override");

  auto* analyze =
      app.add_subcommand("analyze", "classify edges and find clusters");
  analyze->add_option("scenario", opt.scenario_file, "scenario JSON file")
      ->required();

  auto* simulate =
      app.add_subcommand("simulate", "integrate the consensus protocol");
  simulate->add_option("scenario", opt.scenario_file, "scenario JSON file")
      ->required();

  auto* spectrum =
      app.add_subcommand("spectrum", "Laplacian eigenvalue listing");
  spectrum->add_option("scenario", opt.scenario_file, "scenario JSON file")
      ->required();
  spectrum->add_flag("--basis", opt.print_basis, "print the nullspace basis");

  auto* verify = app.add_subcommand(
      "verify", "cross-check spectral, graph and dynamic predictions");
  verify->add_option("scenario", opt.scenario_file, "scenario JSON file");
  verify
      ->add_option("--random", opt.random_args,
                   "N D SEED COUNT: verify random graphs instead of a file")
      ->expected(4);

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(opt.output_dir);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (spectrum->parsed()) return cmd_spectrum(opt);
    if (verify->parsed()) {
      opt.random_mode = !opt.random_args.empty();
      if (!opt.random_mode && opt.scenario_file.empty()) {
        std::cerr << "verify needs a scenario file or --random\n";
        return kExitValidation;
      }
      return cmd_verify(opt);
    }
  } catch (const mwc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == mwc::ErrorKind::AgreementFailure ? kExitDisagreement
                                                        : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
