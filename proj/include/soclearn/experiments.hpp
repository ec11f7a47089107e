#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "soclearn/analysis.hpp"
#include "soclearn/engine.hpp"
#include "soclearn/errors.hpp"
#include "soclearn/graph.hpp"
#include "soclearn/parallel.hpp"
#include "soclearn/rng.hpp"

namespace soclearn {

/// Engine parameters shared by every experiment driver. burn_in < 0 selects
/// the default of steps/10; threads == 0 uses all hardware threads. Trials
/// fan out over workers with per-trial seeds derived from the driver seed,
/// and results reduce in index order, so outputs are identical at any
/// thread count.
struct EngineParams {
  int slot_count = 15;
  int agent_count = 15;
  double relocation_prob = 0.01;
  double bayes_factor = 2.0;
  std::int64_t steps = 1000;
  std::int64_t burn_in = -1;
  unsigned threads = 0;

  std::int64_t effective_burn_in() const {
    return burn_in >= 0 ? burn_in : default_burn_in(steps);
  }

  void validate() const {
    if (slot_count < 2) throw ConfigError("slot_count must be >= 2");
    if (agent_count < 1) throw ConfigError("agent_count must be >= 1");
    if (!(relocation_prob >= 0.0 && relocation_prob < 1.0))
      throw ConfigError("relocation_prob must lie in [0, 1)");
    if (!(bayes_factor > 1.0)) throw ConfigError("bayes_factor must be > 1");
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (effective_burn_in() >= steps)
      throw ConfigError("burn_in must be smaller than steps");
  }
};

// Seed lanes used when deriving per-trial streams.
inline constexpr std::uint64_t kGraphLane = 0;     // graph draw / surgery
inline constexpr std::uint64_t kRunLane = 1;       // simulation run seed
inline constexpr std::uint64_t kTestProbLane = 2;  // test observation prob

inline SimConfig make_graph_config(const EngineParams& params,
                                   ObservationGraph graph,
                                   std::uint64_t run_seed) {
  SimConfig cfg;
  cfg.slot_count = params.slot_count;
  cfg.agent_count = params.agent_count;
  cfg.relocation_prob = params.relocation_prob;
  cfg.bayes_factor = params.bayes_factor;
  cfg.steps = params.steps;
  cfg.seed = run_seed;
  cfg.mode = GraphMode{std::move(graph)};
  return cfg;
}

inline SimConfig make_obs_config(const EngineParams& params,
                                 std::vector<double> obs_probs,
                                 std::uint64_t run_seed) {
  SimConfig cfg;
  cfg.slot_count = params.slot_count;
  cfg.agent_count = params.agent_count;
  cfg.relocation_prob = params.relocation_prob;
  cfg.bayes_factor = params.bayes_factor;
  cfg.steps = params.steps;
  cfg.seed = run_seed;
  cfg.mode = RandomObservationMode{std::move(obs_probs)};
  return cfg;
}

namespace detail {

/// Mean/se over the finite entries of a slice (agents that never acted
/// after burn-in report NaN and are excluded).
inline Aggregate aggregate_finite(const std::vector<double>& values,
                                  std::size_t begin, std::size_t end) {
  std::vector<double> finite;
  finite.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i)
    if (std::isfinite(values[i])) finite.push_back(values[i]);
  return aggregate(finite);
}

inline double pooled_rate_excluding(const PerformanceSummary& perf,
                                    int excluded) {
  const std::int64_t acts =
      perf.total_acts - perf.agent_acts[static_cast<std::size_t>(excluded)];
  const std::int64_t hits =
      perf.total_hits - perf.agent_hits[static_cast<std::size_t>(excluded)];
  if (acts <= 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(hits) / static_cast<double>(acts);
}

}  // namespace detail

struct SweepPoint {
  double x = 0.0;
  double societal_mean = std::numeric_limits<double>::quiet_NaN();
  double societal_se = std::numeric_limits<double>::quiet_NaN();
  double test_mean = std::numeric_limits<double>::quiet_NaN();
  double test_se = std::numeric_limits<double>::quiet_NaN();
  std::int64_t trials = 0;
};

struct SweepResult {
  std::string x_label;
  bool has_test = false;
  std::vector<SweepPoint> points;
};

/// Fig 1 driver: for each edge count, draws `trials` uniform random graphs,
/// runs each once, and aggregates the societal hit rate. Per-point seeds are
/// keyed by the edge-count value, so subsets of a sweep reproduce the full
/// sweep's points exactly.
inline SweepResult sweep_edge_count(const EngineParams& params,
                                    const std::vector<std::int64_t>& edge_counts,
                                    std::int64_t trials, std::uint64_t seed) {
  params.validate();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (edge_counts.empty()) throw ConfigError("edge counts must be nonempty");
  const std::int64_t max_edges = max_undirected_edges(params.agent_count);
  for (std::int64_t e : edge_counts)
    if (e < 0 || e > max_edges)
      throw ConfigError("edge count " + std::to_string(e) + " outside [0, " +
                        std::to_string(max_edges) + "]");
  const std::size_t n_points = edge_counts.size();
  const std::size_t n_tasks = n_points * static_cast<std::size_t>(trials);
  std::vector<double> societal(n_tasks);
  parallel_for(n_tasks, params.threads, [&](std::size_t task) {
    const std::size_t point = task / static_cast<std::size_t>(trials);
    const std::size_t t = task % static_cast<std::size_t>(trials);
    const std::uint64_t trial_seed = derive_seed(
        derive_seed(seed, static_cast<std::uint64_t>(edge_counts[point])), t);
    SplitMix64 graph_rng(derive_seed(trial_seed, kGraphLane));
    auto graph = uniform_random_undirected(params.agent_count,
                                           edge_counts[point], graph_rng);
    const auto metrics = run(make_graph_config(
        params, std::move(graph), derive_seed(trial_seed, kRunLane)));
    societal[task] =
        performance(metrics, params.effective_burn_in()).societal_rate;
  });
  SweepResult result;
  result.x_label = "edges";
  result.points.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const auto agg = detail::aggregate_finite(
        societal, k * static_cast<std::size_t>(trials),
        (k + 1) * static_cast<std::size_t>(trials));
    SweepPoint point;
    point.x = static_cast<double>(edge_counts[k]);
    point.societal_mean = agg.mean;
    point.societal_se = agg.se;
    point.trials = agg.count;
    result.points.push_back(point);
  }
  return result;
}

/// Fig 2 driver: a single run on the given graph; the trace carries the
/// (chosen slot, reward slot) series.
inline RunMetrics trace_herding(const EngineParams& params,
                                const ObservationGraph& graph,
                                std::uint64_t seed) {
  params.validate();
  return run(make_graph_config(params, graph, seed));
}

/// Shared core of the defection sweeps: for each degree d, replace the test
/// vertex's listen set with a random d-subset and run `trials` simulations.
/// Per-point seeds are keyed by the degree value.
inline SweepResult defect_sweep(const ObservationGraph& base, int test_vertex,
                                const std::vector<int>& degrees,
                                const EngineParams& params,
                                std::int64_t trials, std::uint64_t seed) {
  params.validate();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  const int m = params.agent_count;
  if (base.node_count() != m)
    throw ConfigError("graph node count must equal agent_count");
  if (test_vertex < 0 || test_vertex >= m)
    throw ConfigError("test vertex out of range");
  if (degrees.empty()) throw ConfigError("degrees must be nonempty");
  for (int d : degrees)
    if (d < 0 || d > m - 1)
      throw ConfigError("degree " + std::to_string(d) + " outside [0, " +
                        std::to_string(m - 1) + "]");
  const std::size_t n_points = degrees.size();
  const std::size_t n_tasks = n_points * static_cast<std::size_t>(trials);
  std::vector<double> test_rate(n_tasks), society_rate(n_tasks);
  parallel_for(n_tasks, params.threads, [&](std::size_t task) {
    const std::size_t point = task / static_cast<std::size_t>(trials);
    const std::size_t t = task % static_cast<std::size_t>(trials);
    const int degree = degrees[point];
    const std::uint64_t trial_seed =
        derive_seed(derive_seed(seed, static_cast<std::uint64_t>(degree)), t);
    SplitMix64 surgery_rng(derive_seed(trial_seed, kGraphLane));
    auto graph = set_listen_degree(base, test_vertex, degree, surgery_rng);
    const auto metrics = run(make_graph_config(
        params, std::move(graph), derive_seed(trial_seed, kRunLane)));
    const auto perf = performance(metrics, params.effective_burn_in());
    test_rate[task] = perf.agent_rate[static_cast<std::size_t>(test_vertex)];
    society_rate[task] = detail::pooled_rate_excluding(perf, test_vertex);
  });
  SweepResult result;
  result.x_label = "degree";
  result.has_test = true;
  result.points.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const std::size_t begin = k * static_cast<std::size_t>(trials);
    const std::size_t end = begin + static_cast<std::size_t>(trials);
    const auto test_agg = detail::aggregate_finite(test_rate, begin, end);
    const auto soc_agg = detail::aggregate_finite(society_rate, begin, end);
    SweepPoint point;
    point.x = static_cast<double>(degrees[k]);
    point.societal_mean = soc_agg.mean;
    point.societal_se = soc_agg.se;
    point.test_mean = test_agg.mean;
    point.test_se = test_agg.se;
    point.trials = test_agg.count;
    result.points.push_back(point);
  }
  return result;
}

/// Fig 3 driver: deviations of test vertex 0 from the complete graph.
inline SweepResult defect_from_complete(const EngineParams& params,
                                        const std::vector<int>& degrees,
                                        std::int64_t trials,
                                        std::uint64_t seed) {
  if (params.agent_count < 2)
    throw ConfigError("defection needs at least 2 agents");
  return defect_sweep(complete_graph(params.agent_count), 0, degrees, params,
                      trials, seed);
}

/// Fig 5 driver: deviations of a chosen test vertex from a given graph.
inline SweepResult defect_on_graph(const ObservationGraph& g0, int test_vertex,
                                   const std::vector<int>& degrees,
                                   const EngineParams& params,
                                   std::int64_t trials, std::uint64_t seed) {
  return defect_sweep(g0, test_vertex, degrees, params, trials, seed);
}

struct BestGraphResult {
  ObservationGraph graph;
  double score = 0.0;
  std::int64_t sample_index = 0;
  std::int64_t samples = 0;
  std::int64_t trials_per_graph = 0;
};

/// Fig 4 driver: samples random graphs with edge counts drawn uniformly from
/// [band_lo, band_hi], scores each by mean societal rate over
/// trials_per_graph runs, and returns the argmax (first sample on ties).
inline BestGraphResult search_best_graph(const EngineParams& params,
                                         std::int64_t samples,
                                         std::int64_t band_lo,
                                         std::int64_t band_hi,
                                         std::int64_t trials_per_graph,
                                         std::uint64_t seed) {
  params.validate();
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (trials_per_graph < 1) throw ConfigError("trials_per_graph must be >= 1");
  const std::int64_t max_edges = max_undirected_edges(params.agent_count);
  if (band_lo < 0 || band_hi > max_edges || band_lo > band_hi)
    throw ConfigError("empty or out-of-range edge band");
  std::vector<ObservationGraph> graphs;
  graphs.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t i = 0; i < samples; ++i) {
    SplitMix64 rng(derive_seed(
        derive_seed(seed, static_cast<std::uint64_t>(i)), kGraphLane));
    const std::int64_t edges =
        band_lo + static_cast<std::int64_t>(rng.next_below(
                      static_cast<std::uint64_t>(band_hi - band_lo + 1)));
    graphs.push_back(
        uniform_random_undirected(params.agent_count, edges, rng));
  }
  const std::size_t n_tasks =
      static_cast<std::size_t>(samples) *
      static_cast<std::size_t>(trials_per_graph);
  std::vector<double> rates(n_tasks);
  parallel_for(n_tasks, params.threads, [&](std::size_t task) {
    const std::size_t i = task / static_cast<std::size_t>(trials_per_graph);
    const std::size_t t = task % static_cast<std::size_t>(trials_per_graph);
    const std::uint64_t run_seed = derive_seed(
        derive_seed(derive_seed(seed, static_cast<std::uint64_t>(i)),
                    kRunLane),
        t);
    const auto metrics =
        run(make_graph_config(params, graphs[i], run_seed));
    rates[task] =
        performance(metrics, params.effective_burn_in()).societal_rate;
  });
  std::int64_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < samples; ++i) {
    const auto agg = detail::aggregate_finite(
        rates,
        static_cast<std::size_t>(i) *
            static_cast<std::size_t>(trials_per_graph),
        static_cast<std::size_t>(i + 1) *
            static_cast<std::size_t>(trials_per_graph));
    if (agg.mean > best_score) {
      best_score = agg.mean;
      best = i;
    }
  }
  return BestGraphResult{graphs[static_cast<std::size_t>(best)], best_score,
                         best, samples, trials_per_graph};
}

struct NodeGainResult {
  std::vector<double> gain;
  std::vector<double> gain_se;
  std::vector<double> baseline_mean;
  std::vector<double> defected_mean;
  std::int64_t trials = 0;
};

/// Fig 6 driver: for each node v, the mean change in v's hit rate when v
/// alone rewires to listen to everyone. Baseline and defected runs share
/// per-trial seeds (common random numbers), and gains average the paired
/// differences.
inline NodeGainResult per_node_defection_gain(const ObservationGraph& g0,
                                              const EngineParams& params,
                                              std::int64_t trials_per_node,
                                              std::uint64_t seed) {
  params.validate();
  if (trials_per_node < 1) throw ConfigError("trials must be >= 1");
  const int m = params.agent_count;
  if (g0.node_count() != m)
    throw ConfigError("graph node count must equal agent_count");
  const std::size_t trials = static_cast<std::size_t>(trials_per_node);
  // run seeds shared between the baseline run and every node's defected run
  const std::uint64_t run_root =
      derive_seed(seed, static_cast<std::uint64_t>(m));
  std::vector<double> baseline(trials * static_cast<std::size_t>(m));
  parallel_for(trials, params.threads, [&](std::size_t t) {
    const auto metrics =
        run(make_graph_config(params, g0, derive_seed(run_root, t)));
    const auto perf = performance(metrics, params.effective_burn_in());
    for (int v = 0; v < m; ++v)
      baseline[t * static_cast<std::size_t>(m) + static_cast<std::size_t>(v)] =
          perf.agent_rate[static_cast<std::size_t>(v)];
  });
  std::vector<double> defected(trials * static_cast<std::size_t>(m));
  const std::size_t n_tasks = static_cast<std::size_t>(m) * trials;
  parallel_for(n_tasks, params.threads, [&](std::size_t task) {
    const int v = static_cast<int>(task / trials);
    const std::size_t t = task % trials;
    SplitMix64 surgery_rng(derive_seed(
        derive_seed(seed, static_cast<std::uint64_t>(v)), kGraphLane));
    const auto graph = set_listen_degree(g0, v, m - 1, surgery_rng);
    const auto metrics =
        run(make_graph_config(params, graph, derive_seed(run_root, t)));
    const auto perf = performance(metrics, params.effective_burn_in());
    defected[t * static_cast<std::size_t>(m) + static_cast<std::size_t>(v)] =
        perf.agent_rate[static_cast<std::size_t>(v)];
  });
  NodeGainResult result;
  result.trials = trials_per_node;
  result.gain.resize(static_cast<std::size_t>(m));
  result.gain_se.resize(static_cast<std::size_t>(m));
  result.baseline_mean.resize(static_cast<std::size_t>(m));
  result.defected_mean.resize(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v) {
    std::vector<double> diffs, base_vals, defect_vals;
    diffs.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      const double b =
          baseline[t * static_cast<std::size_t>(m) + static_cast<std::size_t>(v)];
      const double d =
          defected[t * static_cast<std::size_t>(m) + static_cast<std::size_t>(v)];
      if (std::isfinite(b) && std::isfinite(d)) {
        diffs.push_back(d - b);
        base_vals.push_back(b);
        defect_vals.push_back(d);
      }
    }
    const auto diff_agg = aggregate(diffs);
    result.gain[static_cast<std::size_t>(v)] = diff_agg.mean;
    result.gain_se[static_cast<std::size_t>(v)] = diff_agg.se;
    result.baseline_mean[static_cast<std::size_t>(v)] =
        aggregate(base_vals).mean;
    result.defected_mean[static_cast<std::size_t>(v)] =
        aggregate(defect_vals).mean;
  }
  return result;
}

struct ObsSweepResult {
  double p_s = 0.0;
  bool homogeneous = false;
  std::vector<double> p_t;         // sorted ascending
  std::vector<double> test_rate;   // test node (agent 0)
  std::vector<double> society_rate;
  std::vector<double> test_rate_smoothed;
};

/// Fig 7 driver: every trial draws the test node's observation probability
/// p_t uniformly from [0, 1] and runs the random-observation model with the
/// rest of society at p_s (or everyone at p_t when homogeneous, which traces
/// the societal curve the common optimum is read from). Results are sorted
/// by p_t and the test series EMA-smoothed.
inline ObsSweepResult sweep_test_observation_probability(
    double p_s, const EngineParams& params, std::int64_t trials,
    double ema_alpha, std::uint64_t seed, bool homogeneous = false) {
  params.validate();
  if (!(p_s >= 0.0 && p_s <= 1.0))
    throw ConfigError("p_s must lie in [0, 1]");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  const std::size_t n = static_cast<std::size_t>(trials);
  std::vector<double> p_t(n), test(n), society(n);
  parallel_for(n, params.threads, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(seed, t);
    SplitMix64 prob_rng(derive_seed(trial_seed, kTestProbLane));
    const double pt = prob_rng.next_double();
    std::vector<double> obs_probs(
        static_cast<std::size_t>(params.agent_count), homogeneous ? pt : p_s);
    obs_probs[0] = pt;
    const auto metrics = run(make_obs_config(
        params, std::move(obs_probs), derive_seed(trial_seed, kRunLane)));
    const auto perf = performance(metrics, params.effective_burn_in());
    p_t[t] = pt;
    test[t] = perf.agent_rate[0];
    society[t] = detail::pooled_rate_excluding(perf, 0);
  });
  // drop trials where the test node never acted after burn-in
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t t = 0; t < n; ++t)
    if (std::isfinite(test[t])) order.push_back(t);
  if (order.empty())
    throw InsufficientDataError("no trial produced a test-agent rate");
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_t[a] != p_t[b] ? p_t[a] < p_t[b] : a < b;
  });
  ObsSweepResult result;
  result.p_s = p_s;
  result.homogeneous = homogeneous;
  result.p_t.reserve(order.size());
  result.test_rate.reserve(order.size());
  result.society_rate.reserve(order.size());
  for (std::size_t idx : order) {
    result.p_t.push_back(p_t[idx]);
    result.test_rate.push_back(test[idx]);
    result.society_rate.push_back(society[idx]);
  }
  result.test_rate_smoothed = ema(result.test_rate, ema_alpha);
  return result;
}

struct BestResponsePoint {
  double p_s = 0.0;
  double p_t_star = 0.0;
  double u_star = 0.0;
  std::int64_t trials = 0;
};

/// Best response of the test node to a society at p_s: the p_t maximizing
/// the smoothed test-rate series. Smoothing uses the zero-phase EMA; the
/// one-pass EMA lags by ~1/alpha samples and starts from a single raw
/// sample, both of which wreck an argmax estimate.
inline BestResponsePoint best_response(double p_s, const EngineParams& params,
                                       std::int64_t trials, double ema_alpha,
                                       std::uint64_t seed) {
  if (trials < 2)
    throw InsufficientDataError("best_response needs at least 2 trials");
  const auto sweep = sweep_test_observation_probability(p_s, params, trials,
                                                        ema_alpha, seed);
  if (sweep.p_t.size() < 2)
    throw InsufficientDataError("too few usable trials to smooth");
  const auto smoothed = symmetric_ema(sweep.test_rate, ema_alpha);
  std::size_t best = 0;
  for (std::size_t i = 1; i < smoothed.size(); ++i)
    if (smoothed[i] > smoothed[best]) best = i;
  return BestResponsePoint{p_s, sweep.p_t[best], smoothed[best], trials};
}

struct EquilibriumOptions {
  std::vector<double> grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  int replicates = 5;
  double se_factor = 2.0;          // sign accepted at this many s.e.
  std::int64_t initial_trials = 2000;
  std::int64_t max_trials = 16000;
  int residual_replicates = 5;
  std::int64_t residual_trials = 0;  // 0 -> max_trials
  double interval_tol = 0.004;

  void validate() const {
    if (grid.size() < 2) throw ConfigError("grid needs at least 2 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
        throw ConfigError("grid points must lie in [0, 1]");
      if (i > 0 && !(grid[i] > grid[i - 1]))
        throw ConfigError("grid must be strictly increasing");
    }
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (residual_replicates < 1)
      throw ConfigError("residual_replicates must be >= 1");
    if (initial_trials < 2) throw ConfigError("initial_trials must be >= 2");
    if (max_trials < initial_trials)
      throw ConfigError("max_trials must be >= initial_trials");
    if (!(se_factor > 0.0)) throw ConfigError("se_factor must be > 0");
    if (!(interval_tol > 0.0)) throw ConfigError("interval_tol must be > 0");
  }
};

struct EquilibriumResult {
  double p_star = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::int64_t br_evaluations = 0;
  std::int64_t total_trials = 0;
  // false when some sign test hit the trial cap still statistically
  // indistinguishable from zero (i.e. the point is at the fixed point to
  // within our power)
  bool sign_resolved_throughout = true;
};

/// Bisects BR(p) - p over [0, 1]. `response(p, trials, seed)` returns a
/// best-response estimate; its sign relative to p is accepted once the mean
/// over `replicates` estimates clears se_factor standard errors, doubling
/// trials up to max_trials otherwise. A point that stays indeterminate at
/// the cap is returned as the equilibrium: it is where the curve meets the
/// diagonal to within the attainable resolution. Throws NoEquilibriumError
/// when no sign change exists across the grid.
template <class ResponseFn>
EquilibriumResult find_equilibrium_with(ResponseFn&& response,
                                        const EquilibriumOptions& opts,
                                        std::uint64_t seed) {
  opts.validate();
  EquilibriumResult result;
  std::uint64_t eval_counter = 0;

  auto eval_sign = [&](double p) -> int {
    std::int64_t trials = opts.initial_trials;
    for (;;) {
      std::vector<double> gaps(static_cast<std::size_t>(opts.replicates));
      for (int r = 0; r < opts.replicates; ++r) {
        const double estimate =
            response(p, trials, derive_seed(seed, eval_counter++));
        ++result.br_evaluations;
        result.total_trials += trials;
        gaps[static_cast<std::size_t>(r)] = estimate - p;
      }
      const Aggregate agg = aggregate(gaps);
      if (agg.mean == 0.0) return 0;
      if (!agg.se_defined || agg.se == 0.0) return agg.mean > 0.0 ? 1 : -1;
      if (std::abs(agg.mean) >= opts.se_factor * agg.se)
        return agg.mean > 0.0 ? 1 : -1;
      if (trials >= opts.max_trials) {
        result.sign_resolved_throughout = false;
        return 0;
      }
      trials = std::min(trials * 2, opts.max_trials);
    }
  };

  auto finalize = [&](double p) {
    const std::int64_t trials =
        opts.residual_trials > 0 ? opts.residual_trials : opts.max_trials;
    std::vector<double> estimates(
        static_cast<std::size_t>(opts.residual_replicates));
    for (int r = 0; r < opts.residual_replicates; ++r) {
      estimates[static_cast<std::size_t>(r)] =
          response(p, trials, derive_seed(seed, eval_counter++));
      ++result.br_evaluations;
      result.total_trials += trials;
    }
    result.p_star = p;
    result.residual = std::abs(aggregate(estimates).mean - p);
    return result;
  };

  int prev_sign = eval_sign(opts.grid.front());
  if (prev_sign == 0) return finalize(opts.grid.front());
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < opts.grid.size(); ++i) {
    const int sign = eval_sign(opts.grid[i]);
    if (sign == 0) return finalize(opts.grid[i]);
    if (prev_sign > 0 && sign < 0) {
      lo = opts.grid[i - 1];
      hi = opts.grid[i];
      break;
    }
    prev_sign = sign;
  }
  if (!std::isfinite(lo))
    throw NoEquilibriumError(
        "best-response estimate does not cross the diagonal on the grid");
  while (hi - lo > opts.interval_tol) {
    const double mid = 0.5 * (lo + hi);
    const int sign = eval_sign(mid);
    if (sign == 0) return finalize(mid);
    if (sign > 0)
      lo = mid;
    else
      hi = mid;
  }
  return finalize(0.5 * (lo + hi));
}

/// Eq-solver over the simulated best response in random-observation mode.
inline EquilibriumResult find_equilibrium(const EngineParams& params,
                                          double ema_alpha,
                                          const EquilibriumOptions& opts,
                                          std::uint64_t seed) {
  auto response = [&](double p_s, std::int64_t trials, std::uint64_t s) {
    return best_response(p_s, params, trials, ema_alpha, s).p_t_star;
  };
  return find_equilibrium_with(response, opts, seed);
}

}  // namespace soclearn
