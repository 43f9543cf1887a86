#pragma once

// Coarse ordering by Fiedler-vector seriation: rank the vertices of an
// induced subgraph by the eigenvector of the second-smallest eigenvalue of
// its unnormalised Laplacian D - A.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "seriation/graph.hpp"
#include "seriation/ordering.hpp"
#include "seriation/rng.hpp"

namespace seriation {

struct CoarseOrdering {
  Ranking ranking;
  std::vector<std::string> warnings;
};

struct SpectralOptions {
  double residual_tolerance = 1e-8;  // relative to the Laplacian norm bound
  std::size_t dense_cutoff = 400;    // components up to this size use a dense solver
  std::size_t krylov_dimension = 160;
  std::size_t max_restarts = 60;
};

namespace detail {

/// Local adjacency lists of the subgraph induced by `vertices`.
inline std::vector<std::vector<std::uint32_t>> local_adjacency(const Graph& g, std::span<const Vertex> vertices) {
  std::vector<std::uint32_t> local(g.size(), ~std::uint32_t{0});
  for (std::size_t k = 0; k < vertices.size(); ++k) local[vertices[k]] = std::uint32_t(k);
  std::vector<std::vector<std::uint32_t>> adj(vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k)
    for (Vertex u : g.neighbors(vertices[k]))
      if (local[u] != ~std::uint32_t{0}) adj[k].push_back(local[u]);
  return adj;
}

inline std::vector<std::vector<std::uint32_t>> connected_components(
    const std::vector<std::vector<std::uint32_t>>& adj) {
  std::vector<int> seen(adj.size(), 0);
  std::vector<std::vector<std::uint32_t>> comps;
  for (std::uint32_t s = 0; s < adj.size(); ++s) {
    if (seen[s]) continue;
    std::vector<std::uint32_t> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (std::uint32_t v : adj[comp[head]])
        if (!seen[v]) {
          seen[v] = 1;
          comp.push_back(v);
        }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline void laplacian_apply(const std::vector<std::vector<std::uint32_t>>& adj, const Eigen::VectorXd& x,
                            Eigen::VectorXd& y) {
  for (std::size_t i = 0; i < adj.size(); ++i) {
    double s = double(adj[i].size()) * x[Eigen::Index(i)];
    for (std::uint32_t j : adj[i]) s -= x[Eigen::Index(j)];
    y[Eigen::Index(i)] = s;
  }
}

inline Eigen::VectorXd fiedler_dense(const std::vector<std::vector<std::uint32_t>>& adj) {
  const Eigen::Index m = Eigen::Index(adj.size());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    lap(i, i) = double(adj[std::size_t(i)].size());
    for (std::uint32_t j : adj[std::size_t(i)]) lap(i, Eigen::Index(j)) -= 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  return solver.eigenvectors().col(1);
}

/// Restarted Lanczos with full reorthogonalisation on the complement of the
/// constant vector; returns the smallest Ritz vector there.
inline Eigen::VectorXd fiedler_lanczos(const std::vector<std::vector<std::uint32_t>>& adj,
                                       const SpectralOptions& opt, bool& converged) {
  const Eigen::Index m = Eigen::Index(adj.size());
  std::size_t max_degree = 0;
  for (const auto& nb : adj) max_degree = std::max(max_degree, nb.size());
  const double norm_bound = std::max(1.0, 2.0 * double(max_degree));
  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(double(m)));

  const rng::Stream start_stream(0x5eed, "lanczos-start");
  Eigen::VectorXd start(m);
  for (Eigen::Index i = 0; i < m; ++i) start[i] = start_stream.uniform({std::uint64_t(i)}) - 0.5;

  const Eigen::Index dim = std::min<Eigen::Index>(Eigen::Index(opt.krylov_dimension), m - 1);
  Eigen::MatrixXd Q(m, dim + 1);
  Eigen::VectorXd w(m), best = start;
  converged = false;

  for (std::size_t restart = 0; restart <= opt.max_restarts && !converged; ++restart) {
    Eigen::VectorXd q = start - ones * ones.dot(start);
    q.normalize();
    std::vector<double> alphas, betas;
    Eigen::Index steps = 0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      Q.col(j) = q;
      laplacian_apply(adj, q, w);
      const double a = q.dot(w);
      alphas.push_back(a);
      for (int pass = 0; pass < 2; ++pass) {
        w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
        w -= ones * ones.dot(w);
      }
      const double b = w.norm();
      steps = j + 1;
      if (b < 1e-12 * norm_bound) break;
      betas.push_back(b);
      q = w / b;
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index i = 0; i < steps; ++i) {
      T(i, i) = alphas[std::size_t(i)];
      if (i + 1 < steps) T(i, i + 1) = T(i + 1, i) = betas[std::size_t(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(T);
    const Eigen::VectorXd s = tri.eigenvectors().col(0);
    best = Q.leftCols(steps) * s;
    best.normalize();

    laplacian_apply(adj, best, w);
    const double theta = best.dot(w);
    const double residual = (w - theta * best).norm();
    converged = residual <= opt.residual_tolerance * norm_bound;
    start = best;
  }
  return best;
}

}  // namespace detail

/// Fiedler ordering of the subgraph induced by `vertices`. Disconnected
/// inputs are ordered component by component (components in order of their
/// smallest vertex id) and flagged.
inline CoarseOrdering coarse_spectral_order(const Graph& g, std::span<const Vertex> vertices,
                                            const SpectralOptions& opt = {}) {
  CoarseOrdering out;
  if (vertices.empty()) return out;
  std::vector<Vertex> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());

  const auto adj = detail::local_adjacency(g, sorted);
  const auto comps = detail::connected_components(adj);
  if (comps.size() > 1) out.warnings.push_back("disconnected: " + std::to_string(comps.size()) + " components");

  std::vector<Vertex> order;
  order.reserve(sorted.size());
  for (const auto& comp : comps) {
    if (comp.size() <= 2) {
      for (auto k : comp) order.push_back(sorted[k]);
      continue;
    }
    std::vector<std::vector<std::uint32_t>> sub(comp.size());
    {
      std::vector<std::uint32_t> pos(adj.size(), 0);
      for (std::size_t k = 0; k < comp.size(); ++k) pos[comp[k]] = std::uint32_t(k);
      for (std::size_t k = 0; k < comp.size(); ++k)
        for (auto v : adj[comp[k]]) sub[k].push_back(pos[v]);
    }
    Eigen::VectorXd fiedler;
    if (comp.size() <= opt.dense_cutoff) {
      fiedler = detail::fiedler_dense(sub);
    } else {
      bool converged = false;
      fiedler = detail::fiedler_lanczos(sub, opt, converged);
      if (!converged) out.warnings.push_back("lanczos did not reach the residual tolerance");
    }
    std::vector<Vertex> ids(comp.size());
    std::vector<double> phi(comp.size());
    for (std::size_t k = 0; k < comp.size(); ++k) {
      ids[k] = sorted[comp[k]];
      phi[k] = fiedler[Eigen::Index(k)];
    }
    const Ranking local = rank_from_embedding(ids, phi);
    order.insert(order.end(), local.order().begin(), local.order().end());
  }
  out.ranking = Ranking::from_order(std::move(order));
  return out;
}

}  // namespace seriation
