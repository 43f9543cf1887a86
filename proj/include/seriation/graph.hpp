#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seriation/error.hpp"

namespace seriation {

/// Vertex ids are 0-indexed everywhere outside rank arithmetic.
using Vertex = std::uint32_t;

/// Simple undirected graph: dense adjacency bits plus sorted neighbor lists.
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n) : n_(n), adj_(n * n, 0), neighbors_(n) {}

  /// Build from an edge list. Self loops are rejected; duplicates ignored.
  static Graph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    g.finalize();
    return g;
  }

  std::size_t size() const noexcept { return n_; }

  bool adjacent(Vertex u, Vertex v) const noexcept { return adj_[std::size_t(u) * n_ + v] != 0; }

  /// Row u of the adjacency matrix as 0/1 bytes.
  std::span<const std::uint8_t> row(Vertex u) const noexcept {
    return {adj_.data() + std::size_t(u) * n_, n_};
  }

  /// Neighbors of u in ascending id order.
  std::span<const Vertex> neighbors(Vertex u) const noexcept { return neighbors_[u]; }

  std::size_t degree(Vertex u) const noexcept { return neighbors_[u].size(); }

  std::size_t edge_count() const noexcept {
    std::size_t total = 0;
    for (const auto& nb : neighbors_) total += nb.size();
    return total / 2;
  }

  /// Edges (i, j) with i < j in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count());
    for (Vertex i = 0; i < n_; ++i)
      for (Vertex j : neighbors_[i])
        if (j > i) out.emplace_back(i, j);
    return out;
  }

  void add_edge(Vertex u, Vertex v) {
    require(u < n_ && v < n_, ErrorCode::validation, "edge endpoint out of range");
    require(u != v, ErrorCode::validation, "self loops are not allowed");
    adj_[std::size_t(u) * n_ + v] = 1;
    adj_[std::size_t(v) * n_ + u] = 1;
    dirty_ = true;
  }

  /// Rebuild neighbor lists after a batch of add_edge calls.
  void finalize() {
    if (!dirty_) return;
    for (Vertex u = 0; u < n_; ++u) {
      auto& nb = neighbors_[u];
      nb.clear();
      const std::uint8_t* r = adj_.data() + std::size_t(u) * n_;
      for (Vertex v = 0; v < n_; ++v)
        if (r[v]) nb.push_back(v);
    }
    dirty_ = false;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.adj_ == b.adj_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<Vertex>> neighbors_;
  bool dirty_ = false;
};

/// A sampled graph together with its hidden latent positions. Algorithms only
/// ever see graph(); the positions are reachable solely through the oracle_*
/// accessors below, which evaluation code uses.
class SampledGraph {
 public:
  SampledGraph(Graph graph, std::uint64_t seed, std::optional<std::vector<double>> latent = std::nullopt)
      : graph_(std::move(graph)), seed_(seed), latent_(std::move(latent)) {
    if (latent_)
      require(latent_->size() == graph_.size(), ErrorCode::validation,
              "oracle must hold one latent position per vertex");
  }

  const Graph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return graph_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  bool has_oracle() const noexcept { return latent_.has_value(); }

  friend std::span<const double> oracle_positions(const SampledGraph& g);

 private:
  Graph graph_;
  std::uint64_t seed_;
  std::optional<std::vector<double>> latent_;
};

inline std::span<const double> oracle_positions(const SampledGraph& g) {
  require(g.latent_.has_value(), ErrorCode::sealed_oracle, "latent positions are unavailable");
  return *g.latent_;
}

/// Induced subgraph on `vertices`, relabelled 0..|vertices|-1 in the given order.
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  Graph sub(vertices.size());
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      if (g.adjacent(vertices[a], vertices[b])) sub.add_edge(Vertex(a), Vertex(b));
  sub.finalize();
  return sub;
}

}  // namespace seriation
