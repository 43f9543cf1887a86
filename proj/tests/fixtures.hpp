#pragma once

// Shared test fixtures: the planted-violation alternative kernel and small
// helpers for building graphs and rankings by hand.

#include <algorithm>
#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include "seriation/seriation.hpp"

namespace fixtures {

using namespace seriation;

/// Robinson base kernel plus a bump of height eta on [0,0.1] x [0.6,0.7]
/// (and its mirror), clipped to [0,1]. Breaks the Robinson property.
inline Graphon planted_violation(BoundaryFamilyParams base = {0.8, 0.5, 0.3}, double eta = 0.3) {
  const Graphon w = make_boundary_family(base);
  auto in_bump = [](double x, double y) { return x >= 0.0 && x <= 0.1 && y >= 0.6 && y <= 0.7; };
  Graphon out;
  out.alpha = base.alpha;
  out.label = "planted-violation";
  out.kernel = [w, eta, in_bump](double x, double y) {
    double v = w(x, y);
    if (in_bump(x, y) || in_bump(y, x)) v += eta;
    return std::clamp(v, 0.0, 1.0);
  };
  return out;
}

inline Graph graph_from(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> edges) {
  std::vector<std::pair<Vertex, Vertex>> e(edges);
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) g.add_edge(i, j);
  g.finalize();
  return g;
}

inline std::vector<Vertex> iota_vertices(std::size_t n) {
  std::vector<Vertex> v(n);
  std::iota(v.begin(), v.end(), Vertex{0});
  return v;
}

/// Ranking on ids 0..n-1 from a list of 1-based ranks.
inline Ranking ranks_of(std::initializer_list<Rank> ranks) {
  std::vector<Rank> r(ranks);
  const auto ids = iota_vertices(r.size());
  return Ranking::from_ranks(ids, r);
}

}  // namespace fixtures
