#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace seriation;
using namespace oracles;

TEST(IntervalTriples, Examples) {
  const auto one = interval_triples(3, 1.0, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], (IntervalTriple{{1, 1}, {2, 1}, {3, 1}}));
  const auto six = interval_triples(6, 1.0 / 3.0, 1);
  EXPECT_EQ(six.size(), 21u);
  EXPECT_EQ(std::count_if(six.begin(), six.end(), [](const IntervalTriple& t) { return t.size() == 2; }), 1);
  try {
    interval_triples(3, 0.2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_triples);
  }
}

TEST(IntervalTriples, MatchBruteForceAndStrideIsSubset) {
  for (std::size_t n : {7, 10, 13}) {
    const double mu = 0.34;
    const std::size_t cap = std::size_t(std::floor(mu * double(n)));
    std::set<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> brute;
    for (std::size_t s = 1; s <= cap; ++s)
      for (std::size_t a = 1; a <= n; ++a)
        for (std::size_t b = a + s; b <= n; ++b)
          for (std::size_t c = b + s; c + s - 1 <= n; ++c) brute.insert({s, a, b, c});
    const auto all = interval_triples(n, mu, 1);
    std::set<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> got;
    for (const auto& t : all) {
      ASSERT_LT(t.a.last(), t.b.start);
      ASSERT_LT(t.b.last(), t.c.start);
      ASSERT_LE(t.c.last(), n);
      got.insert({t.size(), t.a.start, t.b.start, t.c.start});
    }
    EXPECT_EQ(got, brute);
    EXPECT_EQ(got.size(), all.size());
    for (const auto& t : interval_triples(n, mu, 2)) EXPECT_TRUE(got.count({t.size(), t.a.start, t.b.start, t.c.start}));
  }
}

TEST(LambdaComponents, Examples) {
  const Ranking id = Ranking::identity(3);
  const IntervalTriple t{{1, 1}, {2, 1}, {3, 1}};
  const LambdaPair e = lambda_components(Graph(3), t, id, 3);
  EXPECT_EQ(e.lambda1, 0.0);
  EXPECT_EQ(e.lambda2, 0.0);
  const LambdaPair ac = lambda_components(fixtures::graph_from(3, {{0, 2}}), t, id, 3);
  EXPECT_DOUBLE_EQ(ac.lambda1, 1.0 / 9);
  EXPECT_DOUBLE_EQ(ac.lambda2, 1.0 / 9);
  const Graph k9 = fixtures::complete_graph(9);
  for (const auto& tr : interval_triples(9, 1.0 / 3, 1)) {
    const LambdaPair c = lambda_components(k9, tr, Ranking::identity(9), 9);
    ASSERT_EQ(c.lambda1, 0.0);
    ASSERT_EQ(c.lambda2, 0.0);
  }
}

TEST(LambdaComponents, MatchDoubleLoopOracleOnAllTriples) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::size_t n = 3 + seed + seed / 2;  // up to 21 vertices, n2 <= 20 on the ranked subset
    const SampledGraph sg = sample_graph(fixtures::planted_violation(), n, seed);
    std::vector<Vertex> sub;
    for (Vertex v = 0; v < n && sub.size() < 20; ++v) sub.push_back(v);
    std::vector<double> phi(sub.size());
    const rng::Stream s(seed, "phi");
    for (std::size_t k = 0; k < sub.size(); ++k) phi[k] = s.uniform({k});
    const Ranking sigma = rank_from_embedding(sub, phi);
    const std::size_t n2 = sub.size();
    const RankedBlockSums sums(sg.graph(), sigma);
    for (const auto& t : interval_triples(n2, 1.0, 1)) {
      const LambdaPair got = lambda_components(sums, t, n2), want = lambda_oracle(sg.graph(), sigma, t, n2);
      ASSERT_EQ(got.lambda1, want.lambda1);
      ASSERT_EQ(got.lambda2, want.lambda2);
    }
  }
}

TEST(LambdaMaxima, RelabelingInvariance) {
  const SampledGraph sg = sample_graph(fixtures::planted_violation(), 40, 3);
  const Ranking sigma = oracle_true_ranking(sg);
  const LambdaReport a = lambda_maxima(sg.graph(), sigma, 0.3, 1);
  // Relabel v -> 39 - v in both the graph and the ranking.
  Graph h(40);
  for (auto [i, j] : sg.graph().edges()) h.add_edge(39 - i, 39 - j);
  h.finalize();
  std::vector<Vertex> order;
  for (Vertex v : sigma.order()) order.push_back(39 - v);
  const LambdaReport b = lambda_maxima(h, Ranking::from_order(order), 0.3, 1);
  EXPECT_EQ(a.lambda_hat, b.lambda_hat);
  EXPECT_EQ(a.argmax1, b.argmax1);
  EXPECT_DOUBLE_EQ(a.lambda_hat, 0.5 * (a.lambda1_max + a.lambda2_max));
}

namespace {

LambdaParams desk_lambda(double mu) {
  LambdaParams lp;
  lp.mu = mu;
  lp.ordering.alpha = 0.5;
  lp.ordering.delta = 0.05;
  lp.ordering.epsilon = 0.25;
  lp.ordering.m1 = 0.03;
  lp.ordering.policy = ThresholdPolicy::floor_at_one;
  return lp;
}

}  // namespace

TEST(LambdaStatistic, CompleteAndEmptyGraphsGiveZero) {
  for (std::uint64_t seed : {1, 2, 3})
    for (double mu : {0.1, 0.3}) {
      LambdaParams lp = desk_lambda(mu);
      lp.stride = seed;
      // Ordering a graph without structure still yields a bijection.
      lp.ordering.policy = ThresholdPolicy::floor_at_one;
      EXPECT_EQ(lambda_statistic(Graph(60), lp, seed).lambda_hat, 0.0);
      EXPECT_EQ(lambda_statistic(fixtures::complete_graph(60), lp, seed).lambda_hat, 0.0);
    }
}

TEST(LambdaStatistic, ReportsItsSettings) {
  const SampledGraph sg = sample_graph(make_boundary_family({0.8, 0.5, 0.3}), 300, 5);
  const LambdaReport r = lambda_statistic(sg.graph(), desk_lambda(0.2), 5);
  EXPECT_EQ(r.n2, 150u);
  EXPECT_EQ(r.stride, default_stride(150));
  EXPECT_GT(r.triples, 0u);
  EXPECT_DOUBLE_EQ(r.lambda_hat, 0.5 * (r.lambda1_max + r.lambda2_max));
  EXPECT_EQ(r.lambda_hat, lambda_statistic(sg.graph(), desk_lambda(0.2), 5).lambda_hat);
  EXPECT_THROW(lambda_statistic(sg.graph(), desk_lambda(0.001), 5), Error);
}

TEST(PopulationLambda, ZeroOnRobinsonKernels) {
  EXPECT_EQ(population_lambda(constant_graphon(0.4), 30), 0.0);
  for (auto p : {BoundaryFamilyParams{0.8, 0.5, 0.3}, BoundaryFamilyParams{0.5, 0.0, 0.3},
                 BoundaryFamilyParams{1.0, 0.9, 0.2}})
    EXPECT_NEAR(population_lambda(make_boundary_family(p), 40), 0.0, 1e-12);
}

TEST(PopulationLambda, PlantedViolationMatchesBruteForce) {
  const Graphon w = fixtures::planted_violation();
  const double got = population_lambda(w, 20, 2);
  EXPECT_GT(got, 0.0);
  EXPECT_NEAR(got, population_oracle(w, 20, 2), 1e-12);
}

TEST(PopulationLambda, MonotoneUnderDyadicRefinement) {
  const Graphon w = fixtures::planted_violation();
  // Same lattice, finer cells: the family of triples only grows.
  const double coarse = population_lambda(w, 10, 8);
  const double fine = population_lambda(w, 20, 4);
  const double finer = population_lambda(w, 40, 2);
  EXPECT_LE(coarse, fine + 1e-12);
  EXPECT_LE(fine, finer + 1e-12);
}
