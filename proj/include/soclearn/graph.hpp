#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "soclearn/errors.hpp"
#include "soclearn/rng.hpp"

namespace soclearn {

/// Directed observation graph over m nodes. Row u lists the nodes whose
/// actions u incorporates: the edge u -> v means "u listens to v", so when v
/// acts, u performs a social update. Rows are kept sorted ascending; loops
/// and duplicate edges are rejected.
class ObservationGraph {
 public:
  ObservationGraph(int node_count, std::vector<std::vector<int>> listens)
      : node_count_(node_count), listens_(std::move(listens)) {
    if (node_count_ < 1) throw ConfigError("graph needs at least 1 node");
    if (listens_.size() != static_cast<std::size_t>(node_count_))
      throw ConfigError("adjacency must have one row per node");
    for (int u = 0; u < node_count_; ++u) {
      auto& row = listens_[static_cast<std::size_t>(u)];
      std::sort(row.begin(), row.end());
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] < 0 || row[i] >= node_count_)
          throw ConfigError("edge endpoint out of range in row " +
                            std::to_string(u));
        if (row[i] == u)
          throw ConfigError("self-loop at node " + std::to_string(u));
        if (i > 0 && row[i] == row[i - 1])
          throw ConfigError("duplicate edge in row " + std::to_string(u));
      }
    }
  }

  int node_count() const noexcept { return node_count_; }

  const std::vector<int>& listens(int u) const {
    return listens_[static_cast<std::size_t>(u)];
  }

  const std::vector<std::vector<int>>& rows() const noexcept {
    return listens_;
  }

  int out_degree(int u) const {
    return static_cast<int>(listens_[static_cast<std::size_t>(u)].size());
  }

  std::int64_t edge_count() const noexcept {
    std::int64_t total = 0;
    for (const auto& row : listens_)
      total += static_cast<std::int64_t>(row.size());
    return total;
  }

  bool listens_to(int u, int v) const {
    const auto& row = listens_[static_cast<std::size_t>(u)];
    return std::binary_search(row.begin(), row.end(), v);
  }

  /// observers()[v] holds every u with v in listens(u): the set of agents
  /// that perform a social update when v acts. Rows come out sorted.
  std::vector<std::vector<int>> observers() const {
    std::vector<std::vector<int>> result(
        static_cast<std::size_t>(node_count_));
    for (int u = 0; u < node_count_; ++u)
      for (int v : listens_[static_cast<std::size_t>(u)])
        result[static_cast<std::size_t>(v)].push_back(u);
    return result;
  }

  bool operator==(const ObservationGraph&) const = default;

 private:
  int node_count_;
  std::vector<std::vector<int>> listens_;
};

inline std::int64_t max_undirected_edges(int m) {
  return static_cast<std::int64_t>(m) * (m - 1) / 2;
}

inline ObservationGraph complete_graph(int m) {
  if (m < 1) throw ConfigError("graph needs at least 1 node");
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m));
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (v != u) rows[static_cast<std::size_t>(u)].push_back(v);
  return ObservationGraph(m, std::move(rows));
}

inline ObservationGraph empty_graph(int m) {
  if (m < 1) throw ConfigError("graph needs at least 1 node");
  return ObservationGraph(m,
                          std::vector<std::vector<int>>(
                              static_cast<std::size_t>(m)));
}

/// Samples uniformly from the graphs with m nodes and `edges` undirected
/// edges; each chosen pair is embedded as both directed edges.
inline ObservationGraph uniform_random_undirected(int m, std::int64_t edges,
                                                  SplitMix64& rng) {
  if (m < 1) throw ConfigError("graph needs at least 1 node");
  const std::int64_t max_edges = max_undirected_edges(m);
  if (edges < 0 || edges > max_edges)
    throw ConfigError("edge count " + std::to_string(edges) +
                      " outside [0, " + std::to_string(max_edges) + "]");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(max_edges));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  // Partial Fisher-Yates: the first `edges` entries are a uniform subset.
  for (std::int64_t k = 0; k < edges; ++k) {
    const std::int64_t j =
        k + static_cast<std::int64_t>(
                rng.next_below(static_cast<std::uint64_t>(max_edges - k)));
    std::swap(pairs[static_cast<std::size_t>(k)],
              pairs[static_cast<std::size_t>(j)]);
  }
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m));
  for (std::int64_t k = 0; k < edges; ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    rows[static_cast<std::size_t>(i)].push_back(j);
    rows[static_cast<std::size_t>(j)].push_back(i);
  }
  return ObservationGraph(m, std::move(rows));
}

/// Replaces row `vertex` with a uniformly random subset of the other nodes
/// of size `degree`; every other row (including edges toward the vertex) is
/// untouched.
inline ObservationGraph set_listen_degree(const ObservationGraph& g,
                                          int vertex, int degree,
                                          SplitMix64& rng) {
  const int m = g.node_count();
  if (vertex < 0 || vertex >= m)
    throw ConfigError("vertex out of range: " + std::to_string(vertex));
  if (degree < 0 || degree > m - 1)
    throw ConfigError("degree " + std::to_string(degree) + " outside [0, " +
                      std::to_string(m - 1) + "]");
  std::vector<int> candidates;
  candidates.reserve(static_cast<std::size_t>(m - 1));
  for (int v = 0; v < m; ++v)
    if (v != vertex) candidates.push_back(v);
  for (int k = 0; k < degree; ++k) {
    const int j = k + static_cast<int>(rng.next_below(
                          static_cast<std::uint64_t>(m - 1 - k)));
    std::swap(candidates[static_cast<std::size_t>(k)],
              candidates[static_cast<std::size_t>(j)]);
  }
  std::vector<std::vector<int>> rows = g.rows();
  rows[static_cast<std::size_t>(vertex)].assign(
      candidates.begin(), candidates.begin() + degree);
  return ObservationGraph(m, std::move(rows));
}

/// Serializes as {"m": int, "listens": [[int, ...], ...]} with sorted rows.
inline std::string save_graph(const ObservationGraph& g) {
  nlohmann::json j;
  j["m"] = g.node_count();
  j["listens"] = g.rows();
  return j.dump(2) + "\n";
}

inline ObservationGraph load_graph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("m") || !j.contains("listens"))
    throw ParseError("graph JSON: expected object with fields m, listens");
  if (!j["m"].is_number_integer())
    throw ParseError("graph JSON: field m must be an integer");
  if (!j["listens"].is_array())
    throw ParseError("graph JSON: field listens must be an array of rows");
  const int m = j["m"].get<int>();
  std::vector<std::vector<int>> rows;
  rows.reserve(j["listens"].size());
  std::size_t row_index = 0;
  for (const auto& row : j["listens"]) {
    if (!row.is_array())
      throw ParseError("graph JSON: listens row " +
                       std::to_string(row_index) + " is not an array");
    std::vector<int> out;
    for (const auto& v : row) {
      if (!v.is_number_integer())
        throw ParseError("graph JSON: non-integer entry in row " +
                         std::to_string(row_index));
      out.push_back(v.get<int>());
    }
    rows.push_back(std::move(out));
    ++row_index;
  }
  try {
    return ObservationGraph(m, std::move(rows));
  } catch (const ConfigError& e) {
    throw ParseError(std::string("graph JSON: ") + e.what());
  }
}

}  // namespace soclearn
