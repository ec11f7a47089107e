#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "soclearn/belief.hpp"
#include "soclearn/errors.hpp"
#include "soclearn/graph.hpp"
#include "soclearn/rng.hpp"

namespace soclearn {

/// Listeners are fixed by the observation graph.
struct GraphMode {
  ObservationGraph graph;
};

/// Each agent uses the actor's choice independently with its own
/// per-step probability.
struct RandomObservationMode {
  std::vector<double> obs_probs;
};

/// Full configuration of one simulation run. The seed feeds four named
/// splitmix64 streams (reward, selection, tie-break, observation coins), so
/// a run replays bit-identically on any platform; the two modes share the
/// first three streams, which is what makes a complete graph and
/// all-probability-one random observation produce identical traces under a
/// shared seed.
struct SimConfig {
  int slot_count = 15;
  int agent_count = 15;
  double relocation_prob = 0.01;
  double bayes_factor = 2.0;
  std::int64_t steps = 1000;
  std::uint64_t seed = 0;
  std::variant<GraphMode, RandomObservationMode> mode{
      GraphMode{complete_graph(15)}};

  void validate() const {
    if (slot_count < 2) throw ConfigError("slot_count must be >= 2");
    if (agent_count < 1) throw ConfigError("agent_count must be >= 1");
    if (!(relocation_prob >= 0.0 && relocation_prob < 1.0))
      throw ConfigError("relocation_prob must lie in [0, 1)");
    if (!(bayes_factor > 1.0)) throw ConfigError("bayes_factor must be > 1");
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (const auto* gm = std::get_if<GraphMode>(&mode)) {
      if (gm->graph.node_count() != agent_count)
        throw ConfigError("graph has " +
                          std::to_string(gm->graph.node_count()) +
                          " nodes but agent_count is " +
                          std::to_string(agent_count));
    } else {
      const auto& probs = std::get<RandomObservationMode>(mode).obs_probs;
      if (probs.size() != static_cast<std::size_t>(agent_count))
        throw ConfigError("obs_probs must have one entry per agent");
      for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0))
          throw ConfigError("observation probabilities must lie in [0, 1]");
    }
  }
};

// Seed lanes for the engine's streams.
inline constexpr std::uint64_t kRewardStream = 0;
inline constexpr std::uint64_t kSelectionStream = 1;
inline constexpr std::uint64_t kTieStream = 2;
inline constexpr std::uint64_t kObservationStream = 3;

struct StepRecord {
  std::int32_t actor;
  std::int32_t chosen_slot;
  std::int32_t reward_slot;  // location at the time of the action
  bool found;

  bool operator==(const StepRecord&) const = default;
};

struct WorldState {
  int reward_slot = 0;
  std::vector<Belief> beliefs;
  std::int64_t step_index = 0;
};

struct RunMetrics {
  std::vector<std::int64_t> acts;
  std::vector<std::int64_t> hits;
  std::vector<StepRecord> trace;

  bool operator==(const RunMetrics&) const = default;
};

/// The serial stochastic process. One step executes, in order: possible
/// reward relocation, relocation diffusion of every belief, uniform actor
/// selection, the actor's argmax inspection and direct update, then social
/// updates for everyone observing the actor (listeners in ascending id
/// order in both modes).
class Simulator {
 public:
  explicit Simulator(SimConfig config)
      : config_(validated(std::move(config))),
        params_(config_.slot_count, config_.relocation_prob,
                config_.bayes_factor),
        reward_rng_(derive_seed(config_.seed, kRewardStream)),
        selection_rng_(derive_seed(config_.seed, kSelectionStream)),
        tie_rng_(derive_seed(config_.seed, kTieStream)),
        observation_rng_(derive_seed(config_.seed, kObservationStream)) {
    state_.beliefs.assign(static_cast<std::size_t>(config_.agent_count),
                          Belief::uniform(config_.slot_count));
    state_.reward_slot = static_cast<int>(
        reward_rng_.next_below(static_cast<std::uint64_t>(config_.slot_count)));
    if (const auto* gm = std::get_if<GraphMode>(&config_.mode))
      observers_ = gm->graph.observers();
  }

  StepRecord step() {
    const int n = config_.slot_count;
    const int m = config_.agent_count;
    if (reward_rng_.next_double() < config_.relocation_prob)
      state_.reward_slot =
          static_cast<int>(reward_rng_.next_below(static_cast<std::uint64_t>(n)));
    for (auto& b : state_.beliefs) b.diffuse(params_);
    const int actor = static_cast<int>(
        selection_rng_.next_below(static_cast<std::uint64_t>(m)));
    auto& acting_belief = state_.beliefs[static_cast<std::size_t>(actor)];
    const int chosen = acting_belief.argmax(tie_rng_);
    const bool found = (chosen == state_.reward_slot);
    acting_belief.observe_direct(chosen, found);
    if (std::holds_alternative<GraphMode>(config_.mode)) {
      for (int u : observers_[static_cast<std::size_t>(actor)])
        state_.beliefs[static_cast<std::size_t>(u)].observe_social(
            chosen, config_.bayes_factor);
    } else {
      const auto& probs =
          std::get<RandomObservationMode>(config_.mode).obs_probs;
      for (int u = 0; u < m; ++u) {
        if (u == actor) continue;
        if (observation_rng_.bernoulli(probs[static_cast<std::size_t>(u)]))
          state_.beliefs[static_cast<std::size_t>(u)].observe_social(
              chosen, config_.bayes_factor);
      }
    }
    ++state_.step_index;
    return StepRecord{actor, chosen, state_.reward_slot, found};
  }

  const WorldState& state() const noexcept { return state_; }
  const SimConfig& config() const noexcept { return config_; }

 private:
  static SimConfig validated(SimConfig config) {
    config.validate();
    return config;
  }

  SimConfig config_;
  UpdateParams params_;
  WorldState state_;
  std::vector<std::vector<int>> observers_;  // graph mode only
  SplitMix64 reward_rng_;
  SplitMix64 selection_rng_;
  SplitMix64 tie_rng_;
  SplitMix64 observation_rng_;
};

/// Runs `config.steps` steps from uniform beliefs and a uniformly random
/// initial reward slot. Deterministic: identical configs produce
/// bit-identical metrics.
inline RunMetrics run(const SimConfig& config) {
  Simulator sim(config);
  RunMetrics metrics;
  metrics.acts.assign(static_cast<std::size_t>(config.agent_count), 0);
  metrics.hits.assign(static_cast<std::size_t>(config.agent_count), 0);
  metrics.trace.reserve(static_cast<std::size_t>(config.steps));
  for (std::int64_t i = 0; i < config.steps; ++i) {
    const StepRecord rec = sim.step();
    metrics.trace.push_back(rec);
    ++metrics.acts[static_cast<std::size_t>(rec.actor)];
    if (rec.found) ++metrics.hits[static_cast<std::size_t>(rec.actor)];
  }
  return metrics;
}

struct PerformanceSummary {
  std::vector<double> agent_rate;  // NaN for agents with no post-burn-in acts
  std::vector<std::int64_t> agent_acts;
  std::vector<std::int64_t> agent_hits;
  double societal_rate = std::numeric_limits<double>::quiet_NaN();
  std::int64_t total_acts = 0;
  std::int64_t total_hits = 0;
};

/// Hit rate per action, counted over the steps after `burn_in`. The societal
/// rate pools hits and acts across agents, which drops zero-act agents from
/// the mean automatically.
inline PerformanceSummary performance(const RunMetrics& metrics,
                                      std::int64_t burn_in) {
  const auto steps = static_cast<std::int64_t>(metrics.trace.size());
  if (burn_in < 0 || burn_in >= steps)
    throw ConfigError("burn_in must lie in [0, steps)");
  const std::size_t m = metrics.acts.size();
  PerformanceSummary out;
  out.agent_acts.assign(m, 0);
  out.agent_hits.assign(m, 0);
  for (std::int64_t i = burn_in; i < steps; ++i) {
    const auto& rec = metrics.trace[static_cast<std::size_t>(i)];
    ++out.agent_acts[static_cast<std::size_t>(rec.actor)];
    if (rec.found) ++out.agent_hits[static_cast<std::size_t>(rec.actor)];
  }
  out.agent_rate.assign(m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t a = 0; a < m; ++a) {
    out.total_acts += out.agent_acts[a];
    out.total_hits += out.agent_hits[a];
    if (out.agent_acts[a] > 0)
      out.agent_rate[a] = static_cast<double>(out.agent_hits[a]) /
                          static_cast<double>(out.agent_acts[a]);
  }
  if (out.total_acts > 0)
    out.societal_rate = static_cast<double>(out.total_hits) /
                        static_cast<double>(out.total_acts);
  return out;
}

inline std::int64_t default_burn_in(std::int64_t steps) { return steps / 10; }

}  // namespace soclearn
