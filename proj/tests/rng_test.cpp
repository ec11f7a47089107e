#include "soclearn/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

namespace soclearn {
namespace {

TEST(SplitMix64, SameSeedSameSequence) {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(SplitMix64, DifferentSeedsDiverge) {
  SplitMix64 a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  EXPECT_EQ(equal, 0);
}

TEST(SplitMix64, DoubleInUnitInterval) {
  SplitMix64 rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double v = rng.next_double();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(SplitMix64, NextBelowInRangeAndRoughlyUniform) {
  SplitMix64 rng(3);
  const std::uint64_t bound = 7;
  std::vector<int> counts(bound, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = rng.next_below(bound);
    ASSERT_LT(v, bound);
    ++counts[static_cast<std::size_t>(v)];
  }
  const double expected = static_cast<double>(draws) / bound;
  for (std::uint64_t k = 0; k < bound; ++k)
    EXPECT_NEAR(counts[k], expected, 5.0 * std::sqrt(expected));
}

TEST(SplitMix64, BernoulliEdgeCases) {
  SplitMix64 rng(11);
  for (int i = 0; i < 10000; ++i) EXPECT_FALSE(rng.bernoulli(0.0));
  for (int i = 0; i < 10000; ++i) EXPECT_TRUE(rng.bernoulli(1.0));
}

TEST(DeriveSeed, LanesAreIndependent) {
  const std::uint64_t root = 123;
  EXPECT_NE(derive_seed(root, 0), derive_seed(root, 1));
  EXPECT_NE(derive_seed(root, 0), derive_seed(root + 1, 0));
  // chained derivations stay distinct
  EXPECT_NE(derive_seed(derive_seed(root, 0), 1),
            derive_seed(derive_seed(root, 1), 0));
}

}  // namespace
}  // namespace soclearn
