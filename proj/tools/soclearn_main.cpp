// soclearn command-line runner: binds experiment specs (flags and/or a JSON
// config file, flags winning) to the experiment drivers and writes
// results.csv + metadata.json (+ graph.json for best-graph) into --out.
// The metadata file is itself a valid --config, so any run can be replayed
// exactly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "soclearn/soclearn.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kExperiments[] = {
    "edge-sweep",     "herding-trace", "defect-complete",
    "best-graph",     "defect-optimal", "node-gains",
    "obs-prob-sweep", "best-response",  "equilibrium"};

struct Spec {
  std::string experiment;
  std::string out_dir = "out";
  std::string graph_path;
  std::uint64_t seed = 1;
  int slot_count = 15;
  int agent_count = 15;
  double relocation_prob = 0.01;
  double bayes_factor = 2.0;
  std::int64_t steps = 1000;
  std::int64_t trials = 50;
  std::int64_t burn_in = -1;
  unsigned threads = 0;
  std::string edges = "1-100";
  std::string degree_range;  // empty -> 0..m-1
  double p_s = 0.196;
  std::string p_s_grid = "0,0.25,0.5,0.75,1";
  std::int64_t samples = 1000;
  std::string edge_band = "24-26";
  std::int64_t trials_per_graph = 20;
  double ema_alpha = 0.0005;
  bool homogeneous = false;
  int test_vertex = 0;
  std::string eq_grid = "0,0.2,0.4,0.6,0.8,1";
  std::int64_t eq_initial_trials = 2000;
  std::int64_t eq_max_trials = 16000;
  std::int64_t eq_residual_trials = 0;
  int eq_replicates = 3;
  int eq_residual_replicates = 5;
  double eq_interval_tol = 0.02;
};

std::int64_t parse_int_token(const std::string& token, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (...) {
    throw soclearn::ConfigError("invalid integer '" + token + "' in " + key);
  }
}

// "1-100" or "5,15,25" or a mix ("0-3,7").
std::vector<std::int64_t> parse_int_list(const std::string& text,
                                         const std::string& key) {
  std::vector<std::int64_t> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty())
      throw soclearn::ConfigError("empty entry in " + key);
    const auto dash = token.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_int_token(token, key));
    } else {
      const std::int64_t lo = parse_int_token(token.substr(0, dash), key);
      const std::int64_t hi = parse_int_token(token.substr(dash + 1), key);
      if (hi < lo)
        throw soclearn::ConfigError("descending range '" + token + "' in " +
                                    key);
      for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw soclearn::ConfigError(key + " must be nonempty");
  return out;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& key) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (...) {
      throw soclearn::ConfigError("invalid number '" + token + "' in " + key);
    }
  }
  if (out.empty()) throw soclearn::ConfigError(key + " must be nonempty");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw soclearn::ConfigError("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw soclearn::ConfigError("cannot write file: " + path.string());
  out << content;
  if (!out) throw soclearn::ConfigError("write failed: " + path.string());
}

struct Binder {
  std::string flag;
  std::function<void(const json&)> apply;
};

json require_number(const json& v, const std::string& key) {
  if (!v.is_number())
    throw soclearn::ConfigError("config key '" + key + "' must be a number");
  return v;
}

json require_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw soclearn::ConfigError("config key '" + key + "' must be an integer");
  return v;
}

json require_string(const json& v, const std::string& key) {
  if (!v.is_string())
    throw soclearn::ConfigError("config key '" + key + "' must be a string");
  return v;
}

std::map<std::string, Binder> make_binders(Spec& spec) {
  std::map<std::string, Binder> binders;
  auto add_string = [&](const std::string& key, const std::string& flag,
                        std::string& field) {
    binders[key] = Binder{
        flag, [&field, key](const json& v) {
          field = require_string(v, key).get<std::string>();
        }};
  };
  auto add_int = [&](const std::string& key, const std::string& flag,
                     auto& field) {
    binders[key] = Binder{
        flag, [&field, key](const json& v) {
          field = require_integer(v, key)
                      .get<std::remove_reference_t<decltype(field)>>();
        }};
  };
  auto add_double = [&](const std::string& key, const std::string& flag,
                        double& field) {
    binders[key] = Binder{flag, [&field, key](const json& v) {
                            field = require_number(v, key).get<double>();
                          }};
  };
  add_string("experiment", "--experiment", spec.experiment);
  add_string("out", "--out", spec.out_dir);
  add_string("graph", "--graph", spec.graph_path);
  add_int("seed", "--seed", spec.seed);
  add_int("n", "--n", spec.slot_count);
  add_int("m", "--m", spec.agent_count);
  add_double("p", "--p", spec.relocation_prob);
  add_double("bayes_factor", "--bayes-factor", spec.bayes_factor);
  add_int("steps", "--steps", spec.steps);
  add_int("trials", "--trials", spec.trials);
  add_int("burn_in", "--burn-in", spec.burn_in);
  add_int("threads", "--threads", spec.threads);
  add_string("edges", "--edges", spec.edges);
  add_string("degree_range", "--degree-range", spec.degree_range);
  add_double("p_s", "--p-s", spec.p_s);
  add_string("p_s_grid", "--p-s-grid", spec.p_s_grid);
  add_int("samples", "--samples", spec.samples);
  add_string("edge_band", "--edge-band", spec.edge_band);
  add_int("trials_per_graph", "--trials-per-graph", spec.trials_per_graph);
  add_double("alpha", "--alpha", spec.ema_alpha);
  add_int("test_vertex", "--test-vertex", spec.test_vertex);
  add_string("eq_grid", "--eq-grid", spec.eq_grid);
  add_int("eq_initial_trials", "--eq-initial-trials", spec.eq_initial_trials);
  add_int("eq_max_trials", "--eq-max-trials", spec.eq_max_trials);
  add_int("eq_residual_trials", "--eq-residual-trials",
          spec.eq_residual_trials);
  add_int("eq_replicates", "--eq-replicates", spec.eq_replicates);
  add_int("eq_residual_replicates", "--eq-residual-replicates",
          spec.eq_residual_replicates);
  add_double("eq_interval_tol", "--eq-interval-tol", spec.eq_interval_tol);
  binders["homogeneous"] = Binder{
      "--homogeneous", [&spec](const json& v) {
        if (!v.is_boolean())
          throw soclearn::ConfigError(
              "config key 'homogeneous' must be a boolean");
        spec.homogeneous = v.get<bool>();
      }};
  return binders;
}

void validate_spec(const Spec& spec) {
  bool known = false;
  for (const char* name : kExperiments)
    if (spec.experiment == name) known = true;
  if (!known) {
    std::string names;
    for (const char* name : kExperiments) {
      if (!names.empty()) names += ", ";
      names += name;
    }
    throw soclearn::ConfigError("unknown experiment '" + spec.experiment +
                                "' (expected one of: " + names + ")");
  }
  if (spec.slot_count < 2) throw soclearn::ConfigError("--n must be >= 2");
  if (spec.agent_count < 1) throw soclearn::ConfigError("--m must be >= 1");
  if (!(spec.relocation_prob >= 0.0 && spec.relocation_prob < 1.0))
    throw soclearn::ConfigError("--p must lie in [0, 1)");
  if (!(spec.bayes_factor > 1.0))
    throw soclearn::ConfigError("--bayes-factor must be > 1");
  if (spec.steps < 1) throw soclearn::ConfigError("--steps must be >= 1");
  if (spec.trials < 1) throw soclearn::ConfigError("--trials must be >= 1");
  if (spec.burn_in >= spec.steps)
    throw soclearn::ConfigError("--burn-in must be smaller than --steps");
  if (!(spec.p_s >= 0.0 && spec.p_s <= 1.0))
    throw soclearn::ConfigError("--p-s must lie in [0, 1]");
  if (!(spec.ema_alpha > 0.0 && spec.ema_alpha <= 1.0))
    throw soclearn::ConfigError("--alpha must lie in (0, 1]");
  if (spec.samples < 1) throw soclearn::ConfigError("--samples must be >= 1");
  if (spec.trials_per_graph < 1)
    throw soclearn::ConfigError("--trials-per-graph must be >= 1");
  if (spec.test_vertex < 0 || spec.test_vertex >= spec.agent_count)
    throw soclearn::ConfigError("--test-vertex must lie in [0, m)");
}

json to_metadata(const Spec& spec) {
  json j;
  j["version"] = soclearn::kVersion;
  j["experiment"] = spec.experiment;
  j["out"] = spec.out_dir;
  j["graph"] = spec.graph_path;
  j["seed"] = spec.seed;
  j["n"] = spec.slot_count;
  j["m"] = spec.agent_count;
  j["p"] = spec.relocation_prob;
  j["bayes_factor"] = spec.bayes_factor;
  j["steps"] = spec.steps;
  j["trials"] = spec.trials;
  j["burn_in"] = spec.burn_in;
  j["threads"] = spec.threads;
  j["edges"] = spec.edges;
  j["degree_range"] = spec.degree_range;
  j["p_s"] = spec.p_s;
  j["p_s_grid"] = spec.p_s_grid;
  j["samples"] = spec.samples;
  j["edge_band"] = spec.edge_band;
  j["trials_per_graph"] = spec.trials_per_graph;
  j["alpha"] = spec.ema_alpha;
  j["homogeneous"] = spec.homogeneous;
  j["test_vertex"] = spec.test_vertex;
  j["eq_grid"] = spec.eq_grid;
  j["eq_initial_trials"] = spec.eq_initial_trials;
  j["eq_max_trials"] = spec.eq_max_trials;
  j["eq_residual_trials"] = spec.eq_residual_trials;
  j["eq_replicates"] = spec.eq_replicates;
  j["eq_residual_replicates"] = spec.eq_residual_replicates;
  j["eq_interval_tol"] = spec.eq_interval_tol;
  return j;
}

soclearn::EngineParams engine_params(const Spec& spec) {
  soclearn::EngineParams params;
  params.slot_count = spec.slot_count;
  params.agent_count = spec.agent_count;
  params.relocation_prob = spec.relocation_prob;
  params.bayes_factor = spec.bayes_factor;
  params.steps = spec.steps;
  params.burn_in = spec.burn_in;
  params.threads = spec.threads;
  return params;
}

std::vector<int> resolve_degrees(const Spec& spec) {
  if (spec.degree_range.empty()) {
    std::vector<int> degrees;
    for (int d = 0; d < spec.agent_count; ++d) degrees.push_back(d);
    return degrees;
  }
  std::vector<int> degrees;
  for (std::int64_t v : parse_int_list(spec.degree_range, "--degree-range"))
    degrees.push_back(static_cast<int>(v));
  return degrees;
}

soclearn::ObservationGraph load_graph_file(const std::string& path) {
  return soclearn::load_graph(read_file(path));
}

soclearn::ObservationGraph require_graph(const Spec& spec) {
  if (spec.graph_path.empty())
    throw soclearn::ConfigError("--graph is required for experiment '" +
                                spec.experiment +
                                "' (produce one with best-graph)");
  return load_graph_file(spec.graph_path);
}

int run_experiment(const Spec& spec) {
  const auto params = engine_params(spec);
  params.validate();
  const fs::path out_dir(spec.out_dir);
  fs::create_directories(out_dir);

  const json metadata = to_metadata(spec);
  std::cout << metadata.dump(2) << "\n";
  write_file(out_dir / "metadata.json", metadata.dump(2) + "\n");

  std::string csv;
  if (spec.experiment == "edge-sweep") {
    const auto edges = parse_int_list(spec.edges, "--edges");
    csv = soclearn::io::sweep_to_csv(
        soclearn::sweep_edge_count(params, edges, spec.trials, spec.seed));
  } else if (spec.experiment == "herding-trace") {
    const auto graph = spec.graph_path.empty()
                           ? soclearn::complete_graph(spec.agent_count)
                           : load_graph_file(spec.graph_path);
    csv = soclearn::io::trace_to_csv(
        soclearn::trace_herding(params, graph, spec.seed).trace);
  } else if (spec.experiment == "defect-complete") {
    csv = soclearn::io::sweep_to_csv(soclearn::defect_from_complete(
        params, resolve_degrees(spec), spec.trials, spec.seed));
  } else if (spec.experiment == "best-graph") {
    const auto band = parse_int_list(spec.edge_band, "--edge-band");
    const auto result = soclearn::search_best_graph(
        params, spec.samples, band.front(), band.back(),
        spec.trials_per_graph, spec.seed);
    write_file(out_dir / "graph.json", soclearn::save_graph(result.graph));
    csv = soclearn::io::best_graph_to_csv(result);
  } else if (spec.experiment == "defect-optimal") {
    csv = soclearn::io::sweep_to_csv(soclearn::defect_on_graph(
        require_graph(spec), spec.test_vertex, resolve_degrees(spec), params,
        spec.trials, spec.seed));
  } else if (spec.experiment == "node-gains") {
    csv = soclearn::io::node_gains_to_csv(soclearn::per_node_defection_gain(
        require_graph(spec), params, spec.trials, spec.seed));
  } else if (spec.experiment == "obs-prob-sweep") {
    csv = soclearn::io::obs_sweep_to_csv(
        soclearn::sweep_test_observation_probability(
            spec.p_s, params, spec.trials, spec.ema_alpha, spec.seed,
            spec.homogeneous));
  } else if (spec.experiment == "best-response") {
    std::vector<soclearn::BestResponsePoint> points;
    const auto grid = parse_double_list(spec.p_s_grid, "--p-s-grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
        throw soclearn::ConfigError("--p-s-grid values must lie in [0, 1]");
      points.push_back(soclearn::best_response(
          grid[i], params, spec.trials, spec.ema_alpha,
          soclearn::derive_seed(spec.seed, i)));
    }
    csv = soclearn::io::best_response_to_csv(points);
  } else if (spec.experiment == "equilibrium") {
    soclearn::EquilibriumOptions opts;
    opts.grid = parse_double_list(spec.eq_grid, "--eq-grid");
    opts.replicates = spec.eq_replicates;
    opts.residual_replicates = spec.eq_residual_replicates;
    opts.initial_trials = spec.eq_initial_trials;
    opts.max_trials = spec.eq_max_trials;
    opts.residual_trials = spec.eq_residual_trials;
    opts.interval_tol = spec.eq_interval_tol;
    csv = soclearn::io::equilibrium_to_csv(soclearn::find_equilibrium(
        params, spec.ema_alpha, opts, spec.seed));
  }

  const fs::path results = out_dir / "results.csv";
  write_file(results, csv);
  std::cout << "wrote " << results.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Spec spec;
  std::string config_path;

  CLI::App app{
      "soclearn: Bayesian social learning on observation networks "
      "(simulator and experiment drivers)"};
  app.add_option("--experiment", spec.experiment,
                 "edge-sweep | herding-trace | defect-complete | best-graph | "
                 "defect-optimal | node-gains | obs-prob-sweep | "
                 "best-response | equilibrium");
  app.add_option("--config", config_path,
                 "JSON config file; flags override its values");
  app.add_option("--out", spec.out_dir, "output directory");
  app.add_option("--seed", spec.seed, "root seed");
  app.add_option("--n", spec.slot_count, "slot count");
  app.add_option("--m", spec.agent_count, "agent count");
  app.add_option("--p", spec.relocation_prob,
                 "per-step reward relocation probability");
  app.add_option("--bayes-factor", spec.bayes_factor, "social Bayes factor");
  app.add_option("--steps", spec.steps, "steps per run");
  app.add_option("--trials", spec.trials, "trials per sweep point / node");
  app.add_option("--burn-in", spec.burn_in,
                 "steps excluded from rates (-1: steps/10)");
  app.add_option("--threads", spec.threads, "worker threads (0: all cores)");
  app.add_option("--edges", spec.edges,
                 "edge counts for edge-sweep, e.g. 1-100 or 5,15,25");
  app.add_option("--degree-range", spec.degree_range,
                 "degrees for defection sweeps (default 0..m-1)");
  app.add_option("--p-s", spec.p_s, "society observation probability");
  app.add_option("--p-s-grid", spec.p_s_grid,
                 "comma list of p_s values for best-response");
  app.add_option("--graph", spec.graph_path, "graph JSON file");
  app.add_option("--samples", spec.samples, "graphs sampled by best-graph");
  app.add_option("--edge-band", spec.edge_band,
                 "edge-count band for best-graph, e.g. 24-26");
  app.add_option("--trials-per-graph", spec.trials_per_graph,
                 "scoring runs per sampled graph");
  app.add_option("--alpha", spec.ema_alpha, "EMA smoothing factor");
  app.add_flag("--homogeneous", spec.homogeneous,
               "obs-prob-sweep: all agents share the drawn probability");
  app.add_option("--test-vertex", spec.test_vertex,
                 "defecting vertex for defect-optimal");
  app.add_option("--eq-grid", spec.eq_grid, "equilibrium scan grid");
  app.add_option("--eq-initial-trials", spec.eq_initial_trials,
                 "trials per best-response replicate (doubled when the sign "
                 "is unresolved)");
  app.add_option("--eq-max-trials", spec.eq_max_trials, "trial cap");
  app.add_option("--eq-residual-trials", spec.eq_residual_trials,
                 "trials per replicate of the final residual estimate "
                 "(0: cap)");
  app.add_option("--eq-replicates", spec.eq_replicates,
                 "best-response replicates per sign test");
  app.add_option("--eq-residual-replicates", spec.eq_residual_replicates,
                 "replicates for the final residual estimate");
  app.add_option("--eq-interval-tol", spec.eq_interval_tol,
                 "bisection interval tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!config_path.empty()) {
      json file;
      try {
        file = json::parse(read_file(config_path));
      } catch (const json::exception& e) {
        throw soclearn::ParseError(std::string("config JSON: ") + e.what());
      }
      if (!file.is_object())
        throw soclearn::ConfigError("config file must hold a JSON object");
      const auto binders = make_binders(spec);
      for (const auto& [key, value] : file.items()) {
        if (key == "version") continue;  // emitted into metadata for replay
        const auto it = binders.find(key);
        if (it == binders.end())
          throw soclearn::ConfigError("unknown config key '" + key + "'");
        if (app.count(it->second.flag) > 0) continue;  // flag wins
        it->second.apply(value);
      }
    }
    if (spec.experiment.empty())
      throw soclearn::ConfigError(
          "--experiment is required (directly or via --config)");
    validate_spec(spec);
    return run_experiment(spec);
  } catch (const soclearn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
