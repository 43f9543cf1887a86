#pragma once

// Block-model estimation of a graphon at the latent positions: order each
// third of the vertices, extend, cut the complement into rank intervals and
// average the adjacency over block pairs.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seriation/error.hpp"
#include "seriation/error_rooting.hpp"
#include "seriation/graph.hpp"
#include "seriation/graphon.hpp"
#include "seriation/ordering.hpp"

namespace seriation {

/// z : V -> [m] with z(i) = min(m, ceil(sigma(i) / q)), q = floor(|V| / m).
struct BlockPartition {
  std::size_t m = 0;
  std::size_t q = 0;
  std::vector<Vertex> vertices;       // ascending id
  std::vector<std::uint32_t> labels;  // labels[k] in [1, m] for vertices[k]

  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> sizes(m, 0);
    for (auto z : labels) ++sizes[z - 1];
    return sizes;
  }
};

inline BlockPartition block_partition(std::span<const Vertex> vertices, const Ranking& sigma, std::size_t m) {
  require(m >= 1, ErrorCode::validation, "block count m must be at least 1");
  require(m <= vertices.size(), ErrorCode::validation,
          "block count m=" + std::to_string(m) + " exceeds |V|=" + std::to_string(vertices.size()));
  BlockPartition z;
  z.m = m;
  z.q = vertices.size() / m;
  z.vertices.assign(vertices.begin(), vertices.end());
  std::sort(z.vertices.begin(), z.vertices.end());
  const Ranking local = restrict_rank(sigma, z.vertices);
  z.labels.reserve(z.vertices.size());
  for (Vertex v : z.vertices) {
    const std::size_t r = local.rank(v);
    z.labels.push_back(std::uint32_t(std::min(m, (r + z.q - 1) / z.q)));
  }
  return z;
}

/// m x m block means of A over z. Diagonal blocks exclude i = j and are 0
/// for blocks of at most one vertex. Index a-1 holds block a.
inline Eigen::MatrixXd block_average(const Graph& g, const BlockPartition& z) {
  const std::size_t m = z.m;
  std::vector<std::uint32_t> label(g.size(), 0);
  for (std::size_t k = 0; k < z.vertices.size(); ++k) label[z.vertices[k]] = z.labels[k];

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(m));
  for (Vertex u : z.vertices) {
    const auto a = label[u];
    for (Vertex v : g.neighbors(u))
      if (const auto b = label[v]) counts(a - 1, b - 1) += 1.0;
  }
  const auto sizes = z.block_sizes();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double sa = double(sizes[a]), sb = double(sizes[b]);
      const double slots = a == b ? sa * (sa - 1.0) : sa * sb;
      if (slots > 0.0) q(Eigen::Index(a), Eigen::Index(b)) = counts(Eigen::Index(a), Eigen::Index(b)) / slots;
    }
  return q;
}

struct EstimationParams {
  std::size_t m = 0;
  OrderingParams ordering = default_ordering();

  static OrderingParams default_ordering() {
    OrderingParams op;
    op.alpha = 0.5;
    op.delta = 0.05;
    return op;
  }

  /// m = ceil(n^(1/(alpha+1) - 3 delta)).
  static std::size_t default_blocks(std::size_t n, double alpha, double delta) {
    return std::size_t(std::ceil(std::pow(double(n), 1.0 / (alpha + 1.0) - 3.0 * delta)));
  }
};

struct SplitEstimate {
  std::vector<Vertex> part;        // V^(r)
  std::vector<Vertex> complement;  // V_c^(r)
  BlockPartition partition;        // over the complement
  Eigen::MatrixXd block_means;
  StageSchedule schedule;
  ExtensionThresholds extension;
};

struct BlockModelEstimate {
  std::size_t m = 0;
  std::array<SplitEstimate, 3> splits;
  std::vector<std::uint8_t> split_of;  // vertex -> r in {0,1,2}
  Eigen::MatrixXd theta;               // n x n, symmetric, zero diagonal
  std::vector<std::string> clamp_warnings;

  /// theta^(r)_{ij}: the split-r block estimate, 0 unless i, j avoid V^(r).
  double split_value(std::size_t r, Vertex i, Vertex j) const {
    const auto& s = splits[r];
    if (split_of[i] == r || split_of[j] == r || i == j) return 0.0;
    return s.block_means(Eigen::Index(label(r, i)) - 1, Eigen::Index(label(r, j)) - 1);
  }

 private:
  friend BlockModelEstimate estimate_graphon(const Graph&, const EstimationParams&, std::uint64_t);
  std::array<std::vector<std::uint32_t>, 3> labels_;  // dense vertex -> block per split

  std::uint32_t label(std::size_t r, Vertex v) const { return labels_[r][v]; }
};

inline BlockModelEstimate estimate_graphon(const Graph& g, const EstimationParams& params, std::uint64_t seed) {
  const auto& op = params.ordering;
  op.validate();
  const std::size_t n = g.size();
  require(op.delta < 1.0 / (3.0 * (1.0 + op.alpha)), ErrorCode::validation,
          "delta must be below 1/(3(1+alpha)) for block estimation");
  require(params.m >= 1 && 3 * params.m <= n, ErrorCode::validation,
          "block count m must satisfy 1 <= m and 3m <= n");

  std::vector<Vertex> all(n);
  for (std::size_t v = 0; v < n; ++v) all[v] = Vertex(v);
  const auto parts = random_split(all, 3, seed);

  BlockModelEstimate est;
  est.m = params.m;
  est.split_of.assign(n, 0);
  for (std::uint8_t r = 0; r < 3; ++r)
    for (Vertex v : parts[r]) est.split_of[v] = r;

  const rng::Stream seeds(seed, "estimate");
  for (std::size_t r = 0; r < 3; ++r) {
    SplitEstimate& s = est.splits[r];
    s.part = parts[r];
    for (std::size_t k = 0; k < 3; ++k)
      if (k != r) s.complement.insert(s.complement.end(), parts[k].begin(), parts[k].end());
    std::sort(s.complement.begin(), s.complement.end());
    require(params.m <= s.complement.size() / 3, ErrorCode::validation,
            "block count m=" + std::to_string(params.m) + " exceeds a third of the complement size " +
                std::to_string(s.complement.size()));

    TransferResult t = order_and_extend(g, s.part, all, op, seeds.bits({r}));
    s.partition = block_partition(s.complement, t.extended, params.m);
    s.block_means = block_average(g, s.partition);
    s.schedule = std::move(t.schedule);
    s.extension = std::move(t.extension);
    for (auto& w : t.warnings) est.clamp_warnings.push_back("split " + std::to_string(r + 1) + ": " + w);

    est.labels_[r].assign(n, 0);
    for (std::size_t k = 0; k < s.partition.vertices.size(); ++k)
      est.labels_[r][s.partition.vertices[k]] = s.partition.labels[k];
  }

  // Pairs from different parts r, l read the one remaining split; pairs
  // inside part r average the two splits that exclude r.
  est.theta = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) {
      const std::size_t a = est.split_of[i], b = est.split_of[j];
      double v = 0.0;
      if (a != b) {
        v = est.split_value(3 - a - b, i, j);
      } else {
        for (std::size_t k = 0; k < 3; ++k)
          if (k != a) v += 0.5 * est.split_value(k, i, j);
      }
      est.theta(i, j) = est.theta(j, i) = v;
    }
  return est;
}

/// Local average of A over the rank windows around floor(n x) and floor(n y),
/// each of half-width b clipped to [1, n]; the divisor is the product of the
/// clipped window sizes.
inline double naive_local_average(const Graph& g, const Ranking& sigma, std::size_t b, double x, double y) {
  const std::size_t n = sigma.size();
  require(n >= 1 && 2 * b + 1 <= n, ErrorCode::validation, "bandwidth needs 2b+1 <= n");
  auto window = [&](double t) {
    const long c = long(std::floor(double(n) * t));
    const long lo = std::max(1L, c - long(b)), hi = std::min(long(n), c + long(b));
    std::vector<Vertex> out;
    for (long r = lo; r <= hi; ++r) out.push_back(sigma.at_rank(Rank(r)));
    return out;
  };
  const auto bx = window(x), by = window(y);
  if (bx.empty() || by.empty()) return 0.0;
  double sum = 0.0;
  for (Vertex i : bx)
    for (Vertex j : by) sum += g.adjacent(i, j) ? 1.0 : 0.0;
  return sum / double(bx.size() * by.size());
}

struct EstimationLossReport {
  double mse = 0.0;
  std::size_t n = 0;
  std::array<double, 3> per_split_mse{};  // theta^(r) against theta on V_c^(r) pairs
};

/// (1/n^2) sum_{i,j} (theta~_ij - w(U_i,U_j))^2 with theta_ii = 0.
inline EstimationLossReport oracle_estimation_loss(const Eigen::MatrixXd& theta, const SampledGraph& sg,
                                                   const Graphon& w) {
  const auto u = oracle_positions(sg);
  const std::size_t n = u.size();
  require(std::size_t(theta.rows()) == n && std::size_t(theta.cols()) == n, ErrorCode::domain_mismatch,
          "estimate size does not match the graph");
  EstimationLossReport rep;
  rep.n = n;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double truth = i == j ? 0.0 : w(u[i], u[j]);
      const double e = theta(Eigen::Index(i), Eigen::Index(j)) - truth;
      s += e * e;
    }
  rep.mse = s / (double(n) * double(n));
  return rep;
}

inline EstimationLossReport oracle_estimation_loss(const BlockModelEstimate& est, const SampledGraph& sg,
                                                   const Graphon& w) {
  EstimationLossReport rep = oracle_estimation_loss(est.theta, sg, w);
  const auto u = oracle_positions(sg);
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& c = est.splits[r].complement;
    double s = 0.0;
    for (Vertex i : c)
      for (Vertex j : c) {
        const double truth = i == j ? 0.0 : w(u[i], u[j]);
        const double e = est.split_value(r, i, j) - truth;
        s += e * e;
      }
    rep.per_split_mse[r] = c.empty() ? 0.0 : s / (double(c.size()) * double(c.size()));
  }
  return rep;
}

}  // namespace seriation
