#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "soclearn/errors.hpp"
#include "soclearn/rng.hpp"

namespace soclearn {

/// Absolute tolerance on the probability-mass invariant.
inline constexpr double kBeliefSumTolerance = 1e-12;

/// Parameters shared by the belief update rules: slot count n, per-step
/// reward relocation probability p, and the social Bayes factor K applied
/// when inferring from another agent's choice.
struct UpdateParams {
  int slot_count;
  double relocation_prob;
  double bayes_factor;

  UpdateParams(int n, double p, double k)
      : slot_count(n), relocation_prob(p), bayes_factor(k) {
    if (n < 2)
      throw ConfigError("slot count must be >= 2, got " + std::to_string(n));
    if (!(p >= 0.0 && p < 1.0))
      throw ConfigError("relocation probability must lie in [0, 1)");
    if (!(k > 1.0)) throw ConfigError("Bayes factor must be > 1");
  }
};

/// One agent's posterior over which slot hides the reward. Entries are
/// non-negative and sum to 1 within kBeliefSumTolerance; every update below
/// preserves both.
class Belief {
 public:
  explicit Belief(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) throw ConfigError("belief needs at least 2 slots");
    double sum = 0.0;
    for (double v : probs_) {
      if (!(v >= 0.0)) throw ConfigError("belief entries must be >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kBeliefSumTolerance)
      throw ConfigError("belief entries must sum to 1");
  }

  /// Maximum-entropy belief: every entry 1/n.
  static Belief uniform(int slot_count) {
    if (slot_count < 2)
      throw ConfigError("slot count must be >= 2, got " +
                        std::to_string(slot_count));
    Belief b;
    b.probs_.assign(static_cast<std::size_t>(slot_count),
                    1.0 / static_cast<double>(slot_count));
    return b;
  }

  int slot_count() const noexcept { return static_cast<int>(probs_.size()); }
  double operator[](int slot) const {
    return probs_[static_cast<std::size_t>(slot)];
  }
  const std::vector<double>& probs() const noexcept { return probs_; }

  /// Relocation update: b <- (1-p) b + p/n. Accounts for the chance that the
  /// reward moved this step and keeps every entry >= p/n.
  void diffuse(const UpdateParams& params) {
    const double keep = 1.0 - params.relocation_prob;
    const double add =
        params.relocation_prob / static_cast<double>(probs_.size());
    for (double& v : probs_) v = keep * v + add;
  }

  /// Conditions on the agent's own inspection of `slot`. A hit collapses the
  /// belief to a point mass; a miss zeroes the slot and renormalizes.
  void observe_direct(int slot, bool found) {
    check_slot(slot);
    if (found) {
      for (double& v : probs_) v = 0.0;
      probs_[static_cast<std::size_t>(slot)] = 1.0;
      return;
    }
    double rest = 0.0;
    for (int i = 0; i < slot_count(); ++i)
      if (i != slot) rest += probs_[static_cast<std::size_t>(i)];
    if (rest <= 0.0)
      throw DegenerateBeliefError(
          "direct observation missed the only slot with probability mass");
    probs_[static_cast<std::size_t>(slot)] = 0.0;
    for (double& v : probs_) v /= rest;
  }

  /// Conditions on another agent having elected to inspect `slot`: the entry
  /// is scaled by the Bayes factor and the vector renormalized.
  void observe_social(int slot, double bayes_factor) {
    check_slot(slot);
    if (!(bayes_factor > 1.0)) throw ConfigError("Bayes factor must be > 1");
    const double z =
        1.0 + (bayes_factor - 1.0) * probs_[static_cast<std::size_t>(slot)];
    probs_[static_cast<std::size_t>(slot)] *= bayes_factor;
    for (double& v : probs_) v /= z;
  }

  /// Index of the maximal entry; exact ties are resolved uniformly at random.
  int argmax(SplitMix64& rng) const {
    double best = probs_[0];
    int first = 0;
    int ties = 1;
    for (int i = 1; i < slot_count(); ++i) {
      const double v = probs_[static_cast<std::size_t>(i)];
      if (v > best) {
        best = v;
        first = i;
        ties = 1;
      } else if (v == best) {
        ++ties;
      }
    }
    if (ties == 1) return first;
    std::uint64_t k = rng.next_below(static_cast<std::uint64_t>(ties));
    for (int i = first;; ++i) {
      if (probs_[static_cast<std::size_t>(i)] == best && k-- == 0) return i;
    }
  }

  bool operator==(const Belief&) const = default;

 private:
  Belief() = default;

  void check_slot(int slot) const {
    if (slot < 0 || slot >= slot_count())
      throw ConfigError("slot index out of range: " + std::to_string(slot));
  }

  std::vector<double> probs_;
};

// Value-style wrappers over the in-place updates.
inline Belief uniform_belief(int slot_count) {
  return Belief::uniform(slot_count);
}

inline Belief diffuse(Belief b, const UpdateParams& params) {
  b.diffuse(params);
  return b;
}

inline Belief direct_update(Belief b, int slot, bool found) {
  b.observe_direct(slot, found);
  return b;
}

inline Belief social_update(Belief b, int slot, double bayes_factor) {
  b.observe_social(slot, bayes_factor);
  return b;
}

inline int choose_slot(const Belief& b, SplitMix64& rng) {
  return b.argmax(rng);
}

}  // namespace soclearn
