#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "soclearn/engine.hpp"
#include "soclearn/experiments.hpp"

// CSV renderers for the experiment drivers. Numbers are formatted with the
// shortest round-trip representation, so files are byte-identical across
// reruns and thread counts. Column layouts are stable; see README.
namespace soclearn::io {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return nlohmann::json(v).dump();
}

inline std::string sweep_to_csv(const SweepResult& result) {
  std::string out = result.x_label +
                    ",societal_mean,societal_se,test_mean,test_se,trials\n";
  for (const auto& p : result.points) {
    out += format_double(p.x);
    out += ',';
    out += format_double(p.societal_mean);
    out += ',';
    out += format_double(p.societal_se);
    out += ',';
    out += format_double(p.test_mean);
    out += ',';
    out += format_double(p.test_se);
    out += ',';
    out += std::to_string(p.trials);
    out += '\n';
  }
  return out;
}

inline std::string trace_to_csv(const std::vector<StepRecord>& trace) {
  std::string out = "step,acting_agent,chosen_slot,reward_slot,found\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& rec = trace[i];
    out += std::to_string(i);
    out += ',';
    out += std::to_string(rec.actor);
    out += ',';
    out += std::to_string(rec.chosen_slot);
    out += ',';
    out += std::to_string(rec.reward_slot);
    out += ',';
    out += rec.found ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string obs_sweep_to_csv(const ObsSweepResult& result) {
  std::string out = "p_t,test_rate,society_rate,test_rate_smoothed\n";
  for (std::size_t i = 0; i < result.p_t.size(); ++i) {
    out += format_double(result.p_t[i]);
    out += ',';
    out += format_double(result.test_rate[i]);
    out += ',';
    out += format_double(result.society_rate[i]);
    out += ',';
    out += format_double(result.test_rate_smoothed[i]);
    out += '\n';
  }
  return out;
}

inline std::string best_response_to_csv(
    const std::vector<BestResponsePoint>& points) {
  std::string out = "p_s,p_t_star,u_star,trials\n";
  for (const auto& p : points) {
    out += format_double(p.p_s);
    out += ',';
    out += format_double(p.p_t_star);
    out += ',';
    out += format_double(p.u_star);
    out += ',';
    out += std::to_string(p.trials);
    out += '\n';
  }
  return out;
}

inline std::string node_gains_to_csv(const NodeGainResult& result) {
  std::string out =
      "node,baseline_mean,defected_mean,gain,gain_se,trials\n";
  for (std::size_t v = 0; v < result.gain.size(); ++v) {
    out += std::to_string(v);
    out += ',';
    out += format_double(result.baseline_mean[v]);
    out += ',';
    out += format_double(result.defected_mean[v]);
    out += ',';
    out += format_double(result.gain[v]);
    out += ',';
    out += format_double(result.gain_se[v]);
    out += ',';
    out += std::to_string(result.trials);
    out += '\n';
  }
  return out;
}

inline std::string best_graph_to_csv(const BestGraphResult& result) {
  std::string out =
      "sample_index,edge_count,score,samples,trials_per_graph\n";
  out += std::to_string(result.sample_index);
  out += ',';
  out += std::to_string(result.graph.edge_count() / 2);
  out += ',';
  out += format_double(result.score);
  out += ',';
  out += std::to_string(result.samples);
  out += ',';
  out += std::to_string(result.trials_per_graph);
  out += '\n';
  return out;
}

inline std::string equilibrium_to_csv(const EquilibriumResult& result) {
  std::string out =
      "p_star,residual,br_evaluations,total_trials,sign_resolved\n";
  out += format_double(result.p_star);
  out += ',';
  out += format_double(result.residual);
  out += ',';
  out += std::to_string(result.br_evaluations);
  out += ',';
  out += std::to_string(result.total_trials);
  out += ',';
  out += result.sign_resolved_throughout ? '1' : '0';
  out += '\n';
  return out;
}

}  // namespace soclearn::io
