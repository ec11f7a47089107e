#include "soclearn/graph.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "soclearn/errors.hpp"
#include "soclearn/rng.hpp"

namespace soclearn {
namespace {

TEST(CompleteGraph, TwoNodes) {
  const auto g = complete_graph(2);
  EXPECT_EQ(g.listens(0), std::vector<int>{1});
  EXPECT_EQ(g.listens(1), std::vector<int>{0});
  EXPECT_EQ(g.edge_count(), 2);
}

TEST(CompleteGraph, FifteenNodesHas210DirectedEdges) {
  EXPECT_EQ(complete_graph(15).edge_count(), 210);
}

TEST(CompleteGraph, SingleNode) {
  const auto g = complete_graph(1);
  EXPECT_EQ(g.edge_count(), 0);
}

TEST(CompleteGraph, ZeroNodesRejected) {
  EXPECT_THROW(complete_graph(0), ConfigError);
}

TEST(GraphConstruction, RejectsBadRows) {
  EXPECT_THROW(ObservationGraph(2, {{0}, {}}), ConfigError);   // self-loop
  EXPECT_THROW(ObservationGraph(2, {{2}, {}}), ConfigError);   // out of range
  EXPECT_THROW(ObservationGraph(2, {{1, 1}, {}}), ConfigError);  // duplicate
  EXPECT_THROW(ObservationGraph(2, {{1}}), ConfigError);  // missing row
}

TEST(UniformRandomUndirected, SaturationGivesCompleteGraph) {
  SplitMix64 rng(1);
  EXPECT_EQ(uniform_random_undirected(15, 105, rng), complete_graph(15));
}

TEST(UniformRandomUndirected, ZeroEdgesGivesEmptyGraph) {
  SplitMix64 rng(1);
  const auto g = uniform_random_undirected(15, 0, rng);
  EXPECT_EQ(g.edge_count(), 0);
}

TEST(UniformRandomUndirected, TooManyEdgesRejected) {
  SplitMix64 rng(1);
  EXPECT_THROW(uniform_random_undirected(15, 106, rng), ConfigError);
  EXPECT_THROW(uniform_random_undirected(4, 7, rng), ConfigError);
}

TEST(UniformRandomUndirected, OutputIsSymmetric) {
  SplitMix64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_below(10));
    const auto edges =
        static_cast<std::int64_t>(rng.next_below(max_undirected_edges(m) + 1));
    const auto g = uniform_random_undirected(m, edges, rng);
    EXPECT_EQ(g.edge_count(), 2 * edges);
    for (int u = 0; u < m; ++u)
      for (int v : g.listens(u)) EXPECT_TRUE(g.listens_to(v, u));
  }
}

// All C(6,2) = 15 two-edge graphs on four vertices, enumerated exhaustively,
// should appear with frequency 1/15 each.
TEST(UniformRandomUndirected, UniformOverTwoEdgeGraphsOnFourVertices) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) pairs.emplace_back(i, j);
  ASSERT_EQ(pairs.size(), 6u);

  std::map<std::set<int>, int> counts;  // key: set of pair indices
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) counts[{a, b}] = 0;
  ASSERT_EQ(counts.size(), 15u);

  SplitMix64 rng(7);
  const int draws = 15000;
  for (int d = 0; d < draws; ++d) {
    const auto g = uniform_random_undirected(4, 2, rng);
    std::set<int> key;
    for (int idx = 0; idx < 6; ++idx)
      if (g.listens_to(pairs[idx].first, pairs[idx].second)) key.insert(idx);
    ASSERT_EQ(key.size(), 2u);
    ++counts.at(key);
  }

  const double expected = draws / 15.0;
  double chi_square = 0.0;
  for (const auto& [key, count] : counts)
    chi_square += (count - expected) * (count - expected) / expected;
  // 99.9th percentile of chi-square with 14 degrees of freedom
  EXPECT_LT(chi_square, 36.12);
}

TEST(SetListenDegree, SaturatedSurgeryKeepsCompleteGraph) {
  SplitMix64 rng(5);
  const auto g = complete_graph(15);
  EXPECT_EQ(set_listen_degree(g, 0, 14, rng), g);
}

TEST(SetListenDegree, ZeroDegreeEmptiesOnlyThatRow) {
  SplitMix64 rng(6);
  const auto base = uniform_random_undirected(8, 12, rng);
  const auto cut = set_listen_degree(base, 3, 0, rng);
  EXPECT_TRUE(cut.listens(3).empty());
  for (int u = 0; u < 8; ++u)
    if (u != 3) EXPECT_EQ(cut.listens(u), base.listens(u));
}

TEST(SetListenDegree, DirectedSurgeryKeepsInDegree) {
  SplitMix64 rng(8);
  const auto g = set_listen_degree(complete_graph(15), 0, 7, rng);
  EXPECT_EQ(g.out_degree(0), 7);
  int in_degree = 0;
  for (int u = 1; u < 15; ++u) {
    EXPECT_EQ(g.out_degree(u), 14);
    if (g.listens_to(u, 0)) ++in_degree;
  }
  EXPECT_EQ(in_degree, 14);
}

TEST(SetListenDegree, NeverTouchesOtherRows) {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 3 + static_cast<int>(rng.next_below(8));
    const auto base = uniform_random_undirected(
        m, static_cast<std::int64_t>(rng.next_below(max_undirected_edges(m) + 1)),
        rng);
    const int v = static_cast<int>(rng.next_below(m));
    const int d = static_cast<int>(rng.next_below(m));  // 0..m-1
    const auto out = set_listen_degree(base, v, d, rng);
    EXPECT_EQ(out.out_degree(v), d);
    for (int u = 0; u < m; ++u)
      if (u != v) EXPECT_EQ(out.listens(u), base.listens(u));
  }
}

TEST(SetListenDegree, DegreeOutOfRangeRejected) {
  SplitMix64 rng(10);
  EXPECT_THROW(set_listen_degree(complete_graph(15), 0, 15, rng), ConfigError);
  EXPECT_THROW(set_listen_degree(complete_graph(15), 0, -1, rng), ConfigError);
  EXPECT_THROW(set_listen_degree(complete_graph(15), 15, 3, rng), ConfigError);
}

TEST(GraphSerialization, RoundTripsCompleteAndEmpty) {
  const auto complete = complete_graph(3);
  EXPECT_EQ(load_graph(save_graph(complete)), complete);
  const auto empty = empty_graph(5);
  EXPECT_EQ(load_graph(save_graph(empty)), empty);
}

TEST(GraphSerialization, RoundTripsRandomGraphs) {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_below(12));
    auto g = uniform_random_undirected(
        m, static_cast<std::int64_t>(rng.next_below(max_undirected_edges(m) + 1)),
        rng);
    if (m > 1)  // make it directed
      g = set_listen_degree(g, 0, static_cast<int>(rng.next_below(m)), rng);
    EXPECT_EQ(load_graph(save_graph(g)), g);
  }
}

TEST(GraphSerialization, RejectsMalformedInput) {
  EXPECT_THROW(load_graph("not json"), ParseError);
  EXPECT_THROW(load_graph("[1,2]"), ParseError);
  EXPECT_THROW(load_graph(R"({"m": 2})"), ParseError);
  EXPECT_THROW(load_graph(R"({"m": "two", "listens": [[],[]]})"), ParseError);
  EXPECT_THROW(load_graph(R"({"m": 2, "listens": [[0],[]]})"),
               ParseError);  // self-loop
  EXPECT_THROW(load_graph(R"({"m": 2, "listens": [[5],[]]})"), ParseError);
  EXPECT_THROW(load_graph(R"({"m": 2, "listens": [[1.5],[]]})"), ParseError);
}

}  // namespace
}  // namespace soclearn
