#pragma once

// Multistage ordering refinement: a single stage extends an ordering of V1
// to V2 using extreme-neighbourhood edge counts; all stages iterate this on
// nested random vertex sets seeded by a coarse ordering.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seriation/error.hpp"
#include "seriation/graph.hpp"
#include "seriation/graphon.hpp"
#include "seriation/ordering.hpp"
#include "seriation/rng.hpp"
#include "seriation/schedule.hpp"
#include "seriation/spectral.hpp"

namespace seriation {

struct StageThresholds {
  std::int64_t c1 = 1;
  std::int64_t c2 = 1;
  std::int64_t c3 = 1;
};

namespace detail {

inline std::vector<Vertex> sorted_copy(std::span<const Vertex> s) {
  std::vector<Vertex> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<std::uint8_t> membership(std::size_t n, std::span<const Vertex> s) {
  std::vector<std::uint8_t> m(n, 0);
  for (Vertex v : s) m[v] = 1;
  return m;
}

/// Counts of the extreme sets of V1 ∩ (N(i) ∪ N(j)) that fall in N(i) and N(j).
struct ExtremeCounts {
  long right_i = 0, right_j = 0, left_i = 0, left_j = 0;
};

/// Both inputs are the sigma1-ranks of V1-neighbours, ascending. Walks the
/// merged union from each end and tallies the first c members.
inline ExtremeCounts extreme_counts(std::span<const Rank> ni, std::span<const Rank> nj, std::size_t c) {
  ExtremeCounts out;
  {
    std::size_t a = ni.size(), b = nj.size(), taken = 0;
    while (taken < c && (a > 0 || b > 0)) {
      const Rank ra = a > 0 ? ni[a - 1] : 0, rb = b > 0 ? nj[b - 1] : 0;
      if (ra == rb) {
        ++out.right_i, ++out.right_j, --a, --b;
      } else if (ra > rb) {
        ++out.right_i, --a;
      } else {
        ++out.right_j, --b;
      }
      ++taken;
    }
  }
  {
    std::size_t a = 0, b = 0, taken = 0;
    const Rank none = std::numeric_limits<Rank>::max();
    while (taken < c && (a < ni.size() || b < nj.size())) {
      const Rank ra = a < ni.size() ? ni[a] : none, rb = b < nj.size() ? nj[b] : none;
      if (ra == rb) {
        ++out.left_i, ++out.left_j, ++a, ++b;
      } else if (ra < rb) {
        ++out.left_i, ++a;
      } else {
        ++out.left_j, ++b;
      }
      ++taken;
    }
  }
  return out;
}

inline void validate_stage_inputs(const Graph& g, std::span<const Vertex> v1, std::span<const Vertex> v2,
                                  const Ranking& sigma1, const StageThresholds& t) {
  require(t.c1 >= 1 && t.c2 >= 1 && t.c3 >= 1, ErrorCode::validation, "single-stage thresholds must be >= 1");
  const auto in2 = membership(g.size(), v2);
  for (Vertex v : v1) require(v < g.size() && in2[v], ErrorCode::validation, "V1 is not a subset of V2");
  require(sigma1.size() == v1.size(), ErrorCode::domain_mismatch, "sigma1 must rank exactly V1");
  for (Vertex v : v1) require(sigma1.contains(v), ErrorCode::domain_mismatch, "sigma1 must rank exactly V1");
}

}  // namespace detail

/// Comparisons among the new vertices V2 \ V1 from extreme-neighbourhood
/// counts against sigma1 (the first loop of a single stage).
inline ComparisonTable phase1_comparisons(const Graph& g, std::span<const Vertex> v1, std::span<const Vertex> v2,
                                          const Ranking& sigma1, const StageThresholds& t) {
  const auto in1 = detail::membership(g.size(), v1);
  std::vector<Vertex> fresh;
  for (Vertex v : detail::sorted_copy(v2))
    if (!in1[v]) fresh.push_back(v);
  ComparisonTable table(fresh);

  std::vector<std::vector<Rank>> ranks(fresh.size());
  for (std::size_t a = 0; a < fresh.size(); ++a) {
    for (Vertex u : g.neighbors(fresh[a]))
      if (in1[u]) ranks[a].push_back(sigma1.rank_or_zero(u));
    std::sort(ranks[a].begin(), ranks[a].end());
  }

  const std::size_t c1 = std::size_t(t.c1);
  const long c2 = long(t.c2);
  for (std::size_t a = 0; a < fresh.size(); ++a)
    for (std::size_t b = a + 1; b < fresh.size(); ++b) {
      // a plays i and b plays j (ids ascending); j further right means F(i,j) = -1.
      const auto c = detail::extreme_counts(ranks[a], ranks[b], c1);
      if (c.right_j - c.right_i > c2 || c.left_i - c.left_j > c2)
        table.set_by_index(a, b, -1);
      else if (c.right_i - c.right_j > c2 || c.left_j - c.left_i > c2)
        table.set_by_index(a, b, 1);
    }
  return table;
}

/// One stage: orders V2 from sigma1 on V1 and the edges touching V2 \ V1.
/// Returns sigma1 itself when V2 = V1. Pairs with an endpoint lacking any
/// neighbour in V2 \ V1 are left uncompared in the second loop.
inline Ranking single_stage(const Graph& g, std::span<const Vertex> v1, std::span<const Vertex> v2,
                            const Ranking& sigma1, const StageThresholds& t) {
  detail::validate_stage_inputs(g, v1, v2, sigma1, t);
  if (v1.size() == v2.size()) return sigma1;

  const ComparisonTable fresh_table = phase1_comparisons(g, v1, v2, sigma1, t);
  const Ranking fresh_rank = rank_from_comparisons(fresh_table);

  const auto all = detail::sorted_copy(v2);
  ComparisonTable table(all);
  const auto in1 = detail::membership(g.size(), v1);

  // Copy the first-loop comparisons.
  const auto fresh = fresh_table.domain();
  std::vector<std::size_t> pos(fresh.size());
  for (std::size_t a = 0; a < fresh.size(); ++a) pos[a] = table.index_of(fresh[a]);
  for (std::size_t a = 0; a < fresh.size(); ++a)
    for (std::size_t b = a + 1; b < fresh.size(); ++b)
      if (int f = fresh_table.at_index(a, b)) table.set_by_index(pos[a], pos[b], f);

  // top/bottom rank among new-vertex neighbours; 0 marks "no such neighbour".
  std::vector<long> top(all.size(), 0), bottom(all.size(), 0);
  for (std::size_t a = 0; a < all.size(); ++a) {
    long hi = 0, lo = std::numeric_limits<long>::max();
    for (Vertex u : g.neighbors(all[a])) {
      const Rank r = fresh_rank.rank_or_zero(u);
      if (r == 0) continue;
      hi = std::max(hi, long(r));
      lo = std::min(lo, long(r));
    }
    if (hi > 0) top[a] = hi, bottom[a] = lo;
  }

  const long c3 = long(t.c3);
  for (std::size_t a = 0; a < all.size(); ++a) {
    if (top[a] == 0) continue;
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (top[b] == 0 || !(in1[all[a]] || in1[all[b]])) continue;
      if (top[b] - top[a] > c3 || bottom[b] - bottom[a] > c3)
        table.set_by_index(a, b, -1);
      else if (top[a] - top[b] > c3 || bottom[a] - bottom[b] > c3)
        table.set_by_index(a, b, 1);
    }
  }
  return rank_from_comparisons(table);
}

/// The default coarse procedure: Fiedler seriation of the induced subgraph.
struct SpectralCoarse {
  SpectralOptions options{};
  CoarseOrdering operator()(const Graph& g, std::span<const Vertex> vertices) const {
    return coarse_spectral_order(g, vertices, options);
  }
};

struct RefineResult {
  Ranking ranking;
  std::vector<std::size_t> set_sizes;  // |V_1|, ..., |V_k|
  std::vector<std::string> warnings;
};

/// Nested vertex sets V_i = {v : B_v <= p_i} with B_v from stream (seed, "B", v).
inline std::vector<std::vector<Vertex>> nested_sets(std::span<const Vertex> vertices, const StageSchedule& s,
                                                    std::uint64_t seed) {
  const rng::Stream coins(seed, "B");
  std::vector<double> b(vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k) b[k] = coins.uniform({vertices[k]});
  std::vector<std::vector<Vertex>> sets(std::size_t(s.k));
  for (int i = 0; i < s.k; ++i)
    for (std::size_t k = 0; k < vertices.size(); ++k)
      if (i + 1 == s.k || b[k] <= s.p[std::size_t(i)]) sets[std::size_t(i)].push_back(vertices[k]);
  return sets;
}

/// All stages on the subgraph induced by `vertices`: coarse ordering of V_1,
/// then one single stage per round with that round's thresholds.
template <class Coarse = SpectralCoarse>
RefineResult refine_all(const Graph& g, std::span<const Vertex> vertices, const StageSchedule& s, std::uint64_t seed,
                        const Coarse& coarse = Coarse{}) {
  require(s.k >= 1 && s.p.size() == std::size_t(s.k) && s.c1.size() == std::size_t(s.k - 1), ErrorCode::validation,
          "malformed schedule");
  const auto sets = nested_sets(vertices, s, seed);
  RefineResult out;
  for (const auto& v : sets) out.set_sizes.push_back(v.size());
  require(sets.front().size() >= 2, ErrorCode::validation,
          "V1 has " + std::to_string(sets.front().size()) + " vertices; increase p1 or n");

  CoarseOrdering initial = coarse(g, sets.front());
  for (auto& w : initial.warnings) out.warnings.push_back("coarse: " + w);
  Ranking sigma = std::move(initial.ranking);
  for (int i = 0; i + 1 < s.k; ++i) {
    const StageThresholds t{s.c1[std::size_t(i)], s.c2[std::size_t(i)], s.c3[std::size_t(i)]};
    sigma = single_stage(g, sets[std::size_t(i)], sets[std::size_t(i + 1)], sigma, t);
  }
  out.ranking = std::move(sigma);
  return out;
}

template <class Coarse = SpectralCoarse>
RefineResult refine_all(const Graph& g, const StageSchedule& s, std::uint64_t seed, const Coarse& coarse = Coarse{}) {
  std::vector<Vertex> all(g.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = Vertex(k);
  return refine_all(g, all, s, seed, coarse);
}

/// Oracle view of one first-loop comparison: the true signal region near
/// r(U_j), and the signal / noise decomposition of the R-count gap.
struct StageDiagnostics {
  Vertex i = 0, j = 0;  // oriented so that U_i < U_j
  std::size_t dist_size = 0;
  long signal = 0;
  long noise = 0;
  long count_gap = 0;          // |R ∩ N(j)| - |R ∩ N(i)|
  double expected_gap = 0.0;   // W(j, Dist) - W(i, Dist)
  std::int64_t c2 = 0;
};

inline StageDiagnostics oracle_stage_diagnostics(const SampledGraph& sg, const Graphon& w, std::span<const Vertex> v1,
                                                 Vertex i, Vertex j, double d1, std::int64_t c1, std::int64_t c2) {
  const auto u = oracle_positions(sg);
  const Graph& g = sg.graph();
  if (u[i] > u[j]) std::swap(i, j);
  StageDiagnostics out;
  out.i = i, out.j = j, out.c2 = c2;
  if (v1.empty()) return out;

  const double rj = support_bounds(w, u[j]).second;
  auto in_dist = [&](Vertex k) { return u[k] >= rj - d1 && u[k] <= rj; };

  std::vector<Vertex> candidates;
  for (Vertex k : v1)
    if (g.adjacent(i, k) || g.adjacent(j, k)) candidates.push_back(k);
  std::sort(candidates.begin(), candidates.end(), [&](Vertex a, Vertex b) { return u[a] < u[b]; });
  const std::size_t take = std::min<std::size_t>(std::size_t(c1), candidates.size());
  const std::span<const Vertex> right(candidates.data() + candidates.size() - take, take);

  for (Vertex k : v1)
    if (in_dist(k)) {
      ++out.dist_size;
      out.expected_gap += w(u[j], u[k]) - w(u[i], u[k]);
    }
  for (Vertex k : right) {
    const int ni = g.adjacent(i, k), nj = g.adjacent(j, k);
    if (in_dist(k))
      out.signal += nj - ni;
    else
      out.noise += ni - nj;
    out.count_gap += nj - ni;
  }
  return out;
}

/// Parameters shared by every pipeline that orders a training part, then
/// extends the order to the whole graph. epsilon defaults to epsilon_0(delta).
struct OrderingParams {
  double alpha = 0.0;
  double delta = 0.1;
  double gamma = 0.3;
  double m1 = 1.0;
  double log_factor_scale = 1.0;
  std::optional<double> epsilon;
  ThresholdPolicy policy = ThresholdPolicy::strict;

  void validate() const {
    require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::validation, "alpha must lie in [0,1]");
    require(delta > 0.0, ErrorCode::validation, "delta must be positive");
    require(gamma > 0.0 && gamma <= 1.0, ErrorCode::validation, "gamma must lie in (0,1]");
    require(m1 > 0.0, ErrorCode::validation, "m1 must be positive");
    require(log_factor_scale > 0.0, ErrorCode::validation, "log_factor_scale must be positive");
  }

  ScheduleParams schedule_for(std::size_t n) const {
    ScheduleParams sp;
    sp.n = n;
    sp.alpha = alpha;
    sp.gamma = gamma;
    sp.epsilon = epsilon ? *epsilon : epsilon_for_delta(delta, alpha).epsilon;
    sp.m1 = m1;
    sp.log_factor_scale = log_factor_scale;
    sp.policy = policy;
    return sp;
  }
};

struct TransferResult {
  Ranking train;     // on the training part
  Ranking extended;  // on all vertices
  StageSchedule schedule;
  ExtensionThresholds extension;
  std::vector<std::string> warnings;
};

/// Orders G[train] with all stages, then extends to `all` in one stage.
template <class Coarse = SpectralCoarse>
TransferResult order_and_extend(const Graph& g, std::span<const Vertex> train, std::span<const Vertex> all,
                                const OrderingParams& params, std::uint64_t seed, const Coarse& coarse = Coarse{}) {
  params.validate();
  TransferResult out;
  out.schedule = build_schedule(params.schedule_for(train.size()));
  RefineResult refined = refine_all(g, train, out.schedule, seed, coarse);
  out.train = std::move(refined.ranking);
  out.extension = extension_thresholds(all.size(), train.size(), params.alpha, params.delta, params.m1, params.policy);
  const StageThresholds t{out.extension.c1, out.extension.c2, out.extension.c3};
  out.extended = single_stage(g, train, all, out.train, t);
  out.warnings = out.schedule.warnings;
  out.warnings.insert(out.warnings.end(), refined.warnings.begin(), refined.warnings.end());
  out.warnings.insert(out.warnings.end(), out.extension.warnings.begin(), out.extension.warnings.end());
  return out;
}

/// A uniformly random near-equal split of `vertices` into `parts` groups,
/// each sorted by id. Part sizes differ by at most one.
inline std::vector<std::vector<Vertex>> random_split(std::span<const Vertex> vertices, std::size_t parts,
                                                     std::uint64_t seed) {
  require(parts >= 1, ErrorCode::validation, "split needs at least one part");
  const rng::Stream keys(seed, "split");
  std::vector<std::pair<std::uint64_t, Vertex>> keyed;
  keyed.reserve(vertices.size());
  for (Vertex v : vertices) keyed.emplace_back(keys.bits({v}), v);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::vector<Vertex>> out(parts);
  for (std::size_t k = 0; k < keyed.size(); ++k) out[k % parts].push_back(keyed[k].second);
  for (auto& part : out) std::sort(part.begin(), part.end());
  return out;
}

}  // namespace seriation
