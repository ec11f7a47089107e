#include "soclearn/belief.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "soclearn/errors.hpp"
#include "soclearn/rng.hpp"

namespace soclearn {
namespace {

double sum_of(const Belief& b) {
  double s = 0.0;
  for (double v : b.probs()) s += v;
  return s;
}

double max_distance_to_uniform(const Belief& b) {
  const double u = 1.0 / b.slot_count();
  double d = 0.0;
  for (double v : b.probs()) d = std::max(d, std::abs(v - u));
  return d;
}

TEST(UniformBelief, TwoSlots) {
  const Belief b = uniform_belief(2);
  EXPECT_DOUBLE_EQ(b[0], 0.5);
  EXPECT_DOUBLE_EQ(b[1], 0.5);
}

TEST(UniformBelief, FifteenSlots) {
  const Belief b = uniform_belief(15);
  ASSERT_EQ(b.slot_count(), 15);
  for (int i = 0; i < 15; ++i) EXPECT_DOUBLE_EQ(b[i], 1.0 / 15.0);
}

TEST(UniformBelief, SingleSlotRejected) {
  EXPECT_THROW(uniform_belief(1), ConfigError);
}

TEST(BeliefConstruction, RejectsInvalidVectors) {
  EXPECT_THROW(Belief({1.0}), ConfigError);
  EXPECT_THROW(Belief({0.5, -0.5, 1.0}), ConfigError);
  EXPECT_THROW(Belief({0.5, 0.4}), ConfigError);
  EXPECT_NO_THROW(Belief({0.5, 0.3, 0.2}));
}

TEST(Diffuse, UniformIsFixedPoint) {
  const UpdateParams params(15, 0.3, 2.0);
  const Belief b = diffuse(uniform_belief(15), params);
  for (int i = 0; i < 15; ++i) EXPECT_NEAR(b[i], 1.0 / 15.0, 1e-15);
}

TEST(Diffuse, IdentityAtZeroRelocation) {
  const UpdateParams params(2, 0.0, 2.0);
  const Belief b = diffuse(Belief({1.0, 0.0}), params);
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  EXPECT_DOUBLE_EQ(b[1], 0.0);
}

TEST(Diffuse, DirectArithmetic) {
  const UpdateParams params(2, 0.01, 2.0);
  const Belief b = diffuse(Belief({1.0, 0.0}), params);
  EXPECT_DOUBLE_EQ(b[0], 0.995);
  EXPECT_DOUBLE_EQ(b[1], 0.005);
}

TEST(Diffuse, ContractsTowardUniformByExactFactor) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(10));
    std::vector<double> raw(n);
    double total = 0.0;
    for (double& v : raw) total += (v = rng.next_double() + 1e-3);
    for (double& v : raw) v /= total;
    Belief b{raw};
    const double p = 0.01 + 0.98 * rng.next_double();
    const UpdateParams params(n, p, 2.0);
    const double before = max_distance_to_uniform(b);
    b.diffuse(params);
    EXPECT_NEAR(max_distance_to_uniform(b), (1.0 - p) * before, 1e-12);
  }
}

TEST(Diffuse, FloorsEntriesAtPOverN) {
  const UpdateParams params(3, 0.3, 2.0);
  Belief b({1.0, 0.0, 0.0});
  b.diffuse(params);
  for (int i = 0; i < 3; ++i) EXPECT_GE(b[i], 0.3 / 3.0);
}

TEST(DirectUpdate, FoundCollapsesToPointMass) {
  const Belief b = direct_update(Belief({0.5, 0.5}), 0, true);
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  EXPECT_DOUBLE_EQ(b[1], 0.0);
}

TEST(DirectUpdate, MissZeroesAndRenormalizes) {
  const Belief b = direct_update(Belief({0.5, 0.3, 0.2}), 0, false);
  EXPECT_DOUBLE_EQ(b[0], 0.0);
  EXPECT_DOUBLE_EQ(b[1], 0.6);
  EXPECT_DOUBLE_EQ(b[2], 0.4);
}

TEST(DirectUpdate, MissOnOnlyMassIsDegenerate) {
  EXPECT_THROW(direct_update(Belief({1.0, 0.0}), 0, false),
               DegenerateBeliefError);
}

TEST(DirectUpdate, FoundThenChooseSlotIsDeterministic) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(8));
    Belief b = uniform_belief(n);
    const int s = static_cast<int>(rng.next_below(n));
    b.observe_direct(s, true);
    for (int k = 0; k < 5; ++k) EXPECT_EQ(choose_slot(b, rng), s);
  }
}

TEST(SocialUpdate, TwoSlotArithmetic) {
  const Belief b = social_update(Belief({0.5, 0.5}), 0, 2.0);
  EXPECT_DOUBLE_EQ(b[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(b[1], 1.0 / 3.0);
}

TEST(SocialUpdate, ThreeSlotArithmetic) {
  const Belief b = social_update(Belief({0.5, 0.3, 0.2}), 0, 2.0);
  EXPECT_NEAR(b[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(b[1], 0.2, 1e-15);
  EXPECT_NEAR(b[2], 2.0 / 15.0, 1e-15);
}

TEST(SocialUpdate, PointMassIsFixedPoint) {
  const Belief b = social_update(Belief({1.0, 0.0}), 0, 2.0);
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  EXPECT_DOUBLE_EQ(b[1], 0.0);
}

TEST(SocialUpdate, IncreasesTargetAndPreservesOtherRanking) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(10));
    std::vector<double> raw(n);
    double total = 0.0;
    for (double& v : raw) total += (v = rng.next_double() + 1e-6);
    for (double& v : raw) v /= total;
    const Belief before{raw};
    const int s = static_cast<int>(rng.next_below(n));
    const Belief after = social_update(before, s, 2.0);
    if (before[s] > 0.0 && before[s] < 1.0) EXPECT_GT(after[s], before[s]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == s || j == s) continue;
        EXPECT_EQ(before[i] < before[j], after[i] < after[j]);
      }
  }
}

TEST(ChooseSlot, UniqueArgmax) {
  SplitMix64 rng(1);
  EXPECT_EQ(choose_slot(Belief({0.1, 0.7, 0.2}), rng), 1);
}

TEST(ChooseSlot, UniformTieBreaksUniformly) {
  SplitMix64 rng(2);
  const Belief b = uniform_belief(3);
  std::vector<int> counts(3, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[choose_slot(b, rng)];
  for (int k = 0; k < 3; ++k)
    EXPECT_NEAR(counts[k] / static_cast<double>(draws), 1.0 / 3.0, 0.02);
}

TEST(ChooseSlot, TwoWayTie) {
  SplitMix64 rng(3);
  const Belief b({0.4, 0.4, 0.2});
  std::vector<int> counts(3, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[choose_slot(b, rng)];
  EXPECT_EQ(counts[2], 0);
  EXPECT_NEAR(counts[0] / static_cast<double>(draws), 0.5, 0.02);
  EXPECT_NEAR(counts[1] / static_cast<double>(draws), 0.5, 0.02);
}

// Random sequences of the three updates keep beliefs normalized and
// non-negative; any later diffuse restores the p/n floor.
TEST(BeliefProperties, RandomUpdateSequencesStayNormalized) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(14));
    const double p = 0.001 + 0.5 * rng.next_double();
    const UpdateParams params(n, p, 2.0);
    Belief b = uniform_belief(n);
    for (int op = 0; op < 30; ++op) {
      const int kind = static_cast<int>(rng.next_below(3));
      const int s = static_cast<int>(rng.next_below(n));
      if (kind == 0) {
        b.diffuse(params);
      } else if (kind == 1) {
        b.diffuse(params);  // mirror the engine: diffusion precedes actions
        b.observe_direct(s, rng.bernoulli(0.2));
      } else {
        b.observe_social(s, 2.0);
      }
      EXPECT_NEAR(sum_of(b), 1.0, 1e-12);
      for (double v : b.probs()) EXPECT_GE(v, 0.0);
    }
    b.diffuse(params);
    for (double v : b.probs()) EXPECT_GE(v, p / n);
  }
}

TEST(UpdateParams, Validation) {
  EXPECT_THROW(UpdateParams(1, 0.01, 2.0), ConfigError);
  EXPECT_THROW(UpdateParams(15, 1.0, 2.0), ConfigError);
  EXPECT_THROW(UpdateParams(15, -0.1, 2.0), ConfigError);
  EXPECT_THROW(UpdateParams(15, 0.01, 1.0), ConfigError);
  EXPECT_NO_THROW(UpdateParams(15, 0.0, 2.0));
}

}  // namespace
}  // namespace soclearn
