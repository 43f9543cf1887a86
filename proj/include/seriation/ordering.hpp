#pragma once

// Rankings, comparison tables and the combinatorics shared by every
// algorithm. Ranks are 1-indexed; vertex ids are 0-indexed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seriation/error.hpp"
#include "seriation/graph.hpp"

namespace seriation {

using Rank = std::uint32_t;

/// A bijection from a vertex subset onto {1, ..., size}.
class Ranking {
 public:
  Ranking() = default;

  /// `order[k]` is the vertex holding rank k + 1.
  static Ranking from_order(std::vector<Vertex> order) {
    Ranking r;
    Vertex max_id = 0;
    for (Vertex v : order) max_id = std::max(max_id, v);
    r.rank_.assign(order.empty() ? 0 : std::size_t(max_id) + 1, 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      require(r.rank_[order[k]] == 0, ErrorCode::validation, "vertex appears twice in an ordering");
      r.rank_[order[k]] = Rank(k + 1);
    }
    r.order_ = std::move(order);
    r.domain_ = r.order_;
    std::sort(r.domain_.begin(), r.domain_.end());
    return r;
  }

  /// Pair each vertex in `domain` with its rank; the ranks must be a
  /// permutation of 1..|domain|.
  static Ranking from_ranks(std::span<const Vertex> domain, std::span<const Rank> ranks) {
    require(domain.size() == ranks.size(), ErrorCode::validation, "domain and ranks differ in length");
    std::vector<Vertex> order(domain.size());
    std::vector<bool> used(domain.size(), false);
    for (std::size_t k = 0; k < domain.size(); ++k) {
      require(ranks[k] >= 1 && ranks[k] <= domain.size() && !used[ranks[k] - 1], ErrorCode::validation,
              "ranks are not a bijection onto 1..n");
      used[ranks[k] - 1] = true;
      order[ranks[k] - 1] = domain[k];
    }
    return from_order(std::move(order));
  }

  static Ranking identity(std::size_t n) {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    return from_order(std::move(order));
  }

  std::size_t size() const noexcept { return order_.size(); }
  bool empty() const noexcept { return order_.empty(); }

  bool contains(Vertex v) const noexcept { return v < rank_.size() && rank_[v] != 0; }

  Rank rank(Vertex v) const {
    require(contains(v), ErrorCode::domain_mismatch, "vertex " + std::to_string(v) + " is not ranked");
    return rank_[v];
  }

  /// Unchecked lookup for hot loops; 0 when v is absent.
  Rank rank_or_zero(Vertex v) const noexcept { return v < rank_.size() ? rank_[v] : 0; }

  Vertex at_rank(Rank r) const { return order_.at(r - 1); }

  /// Vertices in rank order.
  std::span<const Vertex> order() const noexcept { return order_; }

  /// Vertices in ascending id order.
  std::span<const Vertex> domain() const noexcept { return domain_; }

  Ranking reversed() const {
    std::vector<Vertex> rev(order_.rbegin(), order_.rend());
    return from_order(std::move(rev));
  }

  friend bool operator==(const Ranking& a, const Ranking& b) { return a.order_ == b.order_; }

 private:
  std::vector<Vertex> order_;
  std::vector<Rank> rank_;
  std::vector<Vertex> domain_;
};

/// sigma(i) = 1 + |{j : phi(j) < phi(i) or (phi(j) = phi(i) and j < i)}|.
inline Ranking rank_from_embedding(std::span<const Vertex> ids, std::span<const double> phi) {
  require(ids.size() == phi.size(), ErrorCode::validation, "ids and embedding differ in length");
  std::vector<std::size_t> idx(ids.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return phi[a] < phi[b] || (phi[a] == phi[b] && ids[a] < ids[b]);
  });
  std::vector<Vertex> order(ids.size());
  for (std::size_t k = 0; k < idx.size(); ++k) order[k] = ids[idx[k]];
  return Ranking::from_order(std::move(order));
}

inline Ranking rank_from_embedding(std::span<const double> phi) {
  std::vector<Vertex> ids(phi.size());
  std::iota(ids.begin(), ids.end(), Vertex{0});
  return rank_from_embedding(ids, phi);
}

/// The permutation induced by latent positions (oracle side only).
inline Ranking oracle_true_ranking(const SampledGraph& g) { return rank_from_embedding(oracle_positions(g)); }

/// Worst rank displacement against tau or its reversal, whichever is smaller.
inline std::size_t ordering_error(const Ranking& sigma, const Ranking& tau) {
  require(sigma.size() == tau.size() && std::equal(sigma.domain().begin(), sigma.domain().end(), tau.domain().begin()),
          ErrorCode::domain_mismatch, "rankings are over different vertex sets");
  const long n = long(tau.size());
  long forward = 0, backward = 0;
  for (Vertex v : sigma.domain()) {
    const long s = sigma.rank_or_zero(v), t = tau.rank_or_zero(v);
    forward = std::max(forward, std::labs(s - t));
    backward = std::max(backward, std::labs(s - (n + 1 - t)));
  }
  return std::size_t(std::min(forward, backward));
}

/// True iff every pair of sigma's domain at latent distance >= d is ordered by
/// sigma as tau orders it. Positions are indexed by vertex id.
inline bool agrees_at_precision(const Ranking& sigma, const Ranking& tau, std::span<const double> positions, double d) {
  const auto dom = sigma.domain();
  for (std::size_t a = 0; a < dom.size(); ++a)
    for (std::size_t b = a + 1; b < dom.size(); ++b) {
      const Vertex i = dom[a], j = dom[b];
      if (std::abs(positions[i] - positions[j]) < d) continue;
      if ((sigma.rank(i) < sigma.rank(j)) != (tau.rank(i) < tau.rank(j))) return false;
    }
  return true;
}

/// Largest latent distance of a pair misordered by sigma, minimised over the
/// two orientations; sigma agrees with the true order (or its reverse) at
/// every precision level strictly above the returned value.
inline double oracle_precision_level(const Ranking& sigma, std::span<const double> positions) {
  const auto order = sigma.order();
  // For the forward orientation a misordered pair is an inversion of the
  // positions read in sigma order; its largest distance is
  // max_k (prefix max of positions before k) - positions[k].
  auto worst_inversion = [&](auto sign) {
    double best = 0.0, prefix = -std::numeric_limits<double>::infinity();
    for (Vertex v : order) {
      const double x = sign * positions[v];
      best = std::max(best, prefix - x);
      prefix = std::max(prefix, x);
    }
    return best;
  };
  return std::min(worst_inversion(1.0), worst_inversion(-1.0));
}

struct ExtremeSets {
  std::vector<Vertex> right;  // the c highest-ranked members
  std::vector<Vertex> left;   // the c lowest-ranked members
};

/// R(S, sigma, c) and L(S, sigma, c); c >= |S| yields S for both.
inline ExtremeSets extreme_sets(std::span<const Vertex> subset, const Ranking& sigma, std::size_t c) {
  std::vector<Vertex> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end(), [&](Vertex a, Vertex b) { return sigma.rank(a) < sigma.rank(b); });
  const std::size_t take = std::min(c, sorted.size());
  ExtremeSets out;
  out.left.assign(sorted.begin(), sorted.begin() + long(take));
  out.right.assign(sorted.end() - long(take), sorted.end());
  return out;
}

/// F : S^2 -> {-1, 0, +1} stored densely over the domain in ascending id order.
/// F(i,j) = +1 records "i is ranked after j".
class ComparisonTable {
 public:
  ComparisonTable() = default;

  explicit ComparisonTable(std::vector<Vertex> domain) : domain_(std::move(domain)) {
    std::sort(domain_.begin(), domain_.end());
    require(std::adjacent_find(domain_.begin(), domain_.end()) == domain_.end(), ErrorCode::validation,
            "comparison domain has duplicates");
    const Vertex max_id = domain_.empty() ? 0 : domain_.back();
    local_.assign(std::size_t(max_id) + 1, kAbsent);
    for (std::size_t k = 0; k < domain_.size(); ++k) local_[domain_[k]] = std::uint32_t(k);
    values_.assign(domain_.size() * domain_.size(), 0);
  }

  /// F_gamma of a ranking: F(i,j) = +1 if gamma(i) > gamma(j), -1 if smaller.
  /// With this sign rank_from_comparisons(from_ranking(g)) == g.
  static ComparisonTable from_ranking(const Ranking& gamma) {
    ComparisonTable t(std::vector<Vertex>(gamma.domain().begin(), gamma.domain().end()));
    for (Vertex i : t.domain_)
      for (Vertex j : t.domain_)
        if (i < j) t.set(i, j, gamma.rank(i) > gamma.rank(j) ? 1 : -1);
    return t;
  }

  std::span<const Vertex> domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return domain_.size(); }
  bool contains(Vertex v) const noexcept { return v < local_.size() && local_[v] != kAbsent; }

  /// Position of v in domain(), for the index-based accessors.
  std::size_t index_of(Vertex v) const { return index(v); }

  std::int8_t at_index(std::size_t a, std::size_t b) const noexcept { return values_[a * size() + b]; }

  void set_by_index(std::size_t a, std::size_t b, int value) noexcept {
    values_[a * size() + b] = std::int8_t(value);
    values_[b * size() + a] = std::int8_t(-value);
  }

  std::int8_t at(Vertex i, Vertex j) const { return values_[index(i) * size() + index(j)]; }

  /// Sets F(i,j) = value and F(j,i) = -value.
  void set(Vertex i, Vertex j, int value) {
    const std::size_t a = index(i), b = index(j);
    values_[a * size() + b] = std::int8_t(value);
    values_[b * size() + a] = std::int8_t(-value);
  }

  /// Writes a single entry without touching its mirror (may break antisymmetry).
  void set_one_sided(Vertex i, Vertex j, int value) { values_[index(i) * size() + index(j)] = std::int8_t(value); }

  /// Row sums gamma_F in domain order.
  std::vector<long> row_sums() const {
    std::vector<long> gamma(size(), 0);
    for (std::size_t a = 0; a < size(); ++a) {
      long s = 0;
      const std::int8_t* row = values_.data() + a * size();
      for (std::size_t b = 0; b < size(); ++b) s += row[b];
      gamma[a] = s;
    }
    return gamma;
  }

  bool antisymmetric() const noexcept {
    for (std::size_t a = 0; a < size(); ++a) {
      if (values_[a * size() + a] != 0) return false;
      for (std::size_t b = a + 1; b < size(); ++b)
        if (values_[a * size() + b] != -values_[b * size() + a]) return false;
    }
    return true;
  }

  ComparisonTable restricted(std::span<const Vertex> subset) const {
    ComparisonTable t(std::vector<Vertex>(subset.begin(), subset.end()));
    for (Vertex i : t.domain_)
      for (Vertex j : t.domain_) t.values_[t.index(i) * t.size() + t.index(j)] = at(i, j);
    return t;
  }

  friend bool operator==(const ComparisonTable& a, const ComparisonTable& b) {
    return a.domain_ == b.domain_ && a.values_ == b.values_;
  }

 private:
  static constexpr std::uint32_t kAbsent = ~std::uint32_t{0};

  std::size_t index(Vertex v) const {
    require(contains(v), ErrorCode::domain_mismatch, "vertex " + std::to_string(v) + " outside comparison domain");
    return local_[v];
  }

  std::vector<Vertex> domain_;
  std::vector<std::uint32_t> local_;
  std::vector<std::int8_t> values_;
};

/// sigma_F: rank by gamma_F(i) = sum_j F(i,j), ties broken by smaller id first.
inline Ranking rank_from_comparisons(const ComparisonTable& table) {
  require(table.antisymmetric(), ErrorCode::antisymmetry, "comparison table is not antisymmetric");
  const auto gamma = table.row_sums();
  std::vector<double> phi(gamma.begin(), gamma.end());
  return rank_from_embedding(table.domain(), phi);
}

/// Ranks within `subset` that preserve sigma's relative order.
inline Ranking restrict_rank(const Ranking& sigma, std::span<const Vertex> subset) {
  std::vector<Vertex> order(subset.begin(), subset.end());
  for (Vertex v : order)
    require(sigma.contains(v), ErrorCode::domain_mismatch, "subset is not contained in the ranking's domain");
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return sigma.rank(a) < sigma.rank(b); });
  return Ranking::from_order(std::move(order));
}

}  // namespace seriation
