#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "seriation/harness.hpp"

using namespace seriation;

namespace {

ExperimentConfig small_order_config() {
  ExperimentConfig c;
  c.task = Task::order;
  c.graphon = {0.8, 0.0, 0.3};
  c.n_grid = {200};
  c.seeds = {1};
  c.ordering.epsilon = 0.25;
  c.ordering.m1 = 0.03;
  c.ordering.policy = ThresholdPolicy::floor_at_one;
  return c;
}

std::string strip_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    // wall_ms is the sixth comma-separated field; earlier fields are unquoted.
    std::size_t pos = 0;
    for (int k = 0; k < 5; ++k) pos = line.find(',', pos) + 1;
    const std::size_t end = line.find(',', pos);
    out += line.substr(0, pos) + line.substr(end) + "\n";
  }
  return out;
}

}  // namespace

TEST(FitRate, Examples) {
  const std::vector<RatePoint> inv{{100, 0.01}, {1000, 0.001}, {10000, 1e-4}};
  RateFit f = fit_rate(inv);
  EXPECT_NEAR(f.slope, -1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  const std::vector<RatePoint> flat{{100, 0.3}, {1000, 0.3}, {5000, 0.3}};
  EXPECT_NEAR(fit_rate(flat).slope, 0.0, 1e-12);
  const std::vector<RatePoint> two{{100, 0.1}, {10000, 0.01}};
  EXPECT_NEAR(fit_rate(two).slope, -0.5, 1e-12);
  const std::vector<RatePoint> one{{100, 0.1}};
  EXPECT_THROW(fit_rate(one), Error);
}

TEST(FitRate, TwoPointClosedForm) {
  const rng::Stream s(1, "fit");
  for (std::uint64_t t = 0; t < 50; ++t) {
    const double n1 = 10 + 1000 * s.uniform({t, 0}), n2 = n1 * (1.5 + 10 * s.uniform({t, 1}));
    const double e1 = s.uniform({t, 2}) + 1e-3, e2 = s.uniform({t, 3}) + 1e-3;
    const std::vector<RatePoint> pts{{n1, e1}, {n2, e2}};
    ASSERT_NEAR(fit_rate(pts).slope, std::log(e2 / e1) / std::log(n2 / n1), 1e-10);
  }
}

TEST(FitRate, ZerosAreReplacedAndFlagged) {
  const std::vector<RatePoint> pts{{100, 0.0}, {1000, 0.001}};
  const RateFit f = fit_rate(pts);
  EXPECT_EQ(f.replaced_zeros, 1u);
  EXPECT_NEAR(f.slope, -1.0, 1e-12);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_THROW(median({}), Error);
}

TEST(Experiment, OneCellOneRowAndDeterministicCsv) {
  const ExperimentConfig c = small_order_config();
  const auto a = run_experiment(c), b = run_experiment(c);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_FALSE(a[0].failed());
  std::ostringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  const std::string csv = sa.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.rfind("task,n,seed,metric,value,wall_ms,warnings,params_json\n", 0), 0u);
  EXPECT_EQ(strip_wall(csv), strip_wall(sb.str()));
  EXPECT_TRUE(a[0].params.contains("schedule"));
  EXPECT_EQ(a[0].params["ordering"]["m1"], 0.03);
}

TEST(Experiment, FailureRowsAndAllFailed) {
  ExperimentConfig c = small_order_config();
  c.ordering.policy = ThresholdPolicy::strict;
  c.ordering.m1 = 1.0;  // C2 < 1 at both sizes
  c.n_grid = {200, 400};
  try {
    run_experiment(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::all_cells_failed);
  }
  const ResultRecord r = run_cell(c, 200, 1);
  EXPECT_TRUE(r.failed());
  EXPECT_EQ(r.metric, "failed");
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Experiment, MediansExcludeFailures) {
  std::vector<ResultRecord> recs(4);
  recs[0].n = 100, recs[0].value = 0.2;
  recs[1].n = 100, recs[1].value = 0.4;
  recs[2].n = 400, recs[2].value = 0.1;
  recs[3].n = 400;  // failed
  const RateFit f = fit_records(recs);
  EXPECT_EQ(f.excluded_failures, 1u);
  EXPECT_NEAR(f.slope, std::log(0.1 / 0.3) / std::log(4.0), 1e-12);
}

TEST(Experiment, EstimateAndTestTasksRun) {
  ExperimentConfig c = small_order_config();
  c.graphon = {0.8, 0.5, 0.3};
  c.ordering.alpha = 0.5;
  c.ordering.delta = 0.05;
  c.n_grid = {300};
  c.task = Task::estimate;
  const auto e = run_experiment(c);
  EXPECT_EQ(e[0].metric, "mse");
  EXPECT_GT(*e[0].value, 0.0);
  c.task = Task::test;
  const auto t = run_experiment(c);
  EXPECT_EQ(t[0].metric, "lambda_hat");
}

TEST(ExperimentConfig, FromJsonAndValidation) {
  const nlohmann::json j = {{"task", "test"},
                            {"graphon", {{"family", "boundary"}, {"p", 0.7}, {"alpha", 0.5}, {"r", 0.3}}},
                            {"n_grid", {100, 200}},
                            {"seeds", {1, 2}},
                            {"epsilon", 0.25},
                            {"policy", "floor_at_one"},
                            {"mu_exponent", 0.3}};
  const ExperimentConfig c = ExperimentConfig::from_json(j);
  EXPECT_EQ(c.task, Task::test);
  EXPECT_EQ(c.ordering.alpha, 0.5);
  EXPECT_EQ(c.graphon.p, 0.7);
  EXPECT_EQ(*c.ordering.epsilon, 0.25);
  EXPECT_EQ(c.mu_exponent, 0.3);

  auto bad = j;
  bad["n_grid"] = {200, 100};
  EXPECT_THROW(ExperimentConfig::from_json(bad), Error);
  bad = j;
  bad["seeds"] = nlohmann::json::array();
  EXPECT_THROW(ExperimentConfig::from_json(bad), Error);
  bad = j;
  bad["task"] = "plot";
  EXPECT_THROW(ExperimentConfig::from_json(bad), Error);
  bad = j;
  bad["n_grid"] = "many";
  EXPECT_THROW(ExperimentConfig::from_json(bad), Error);
}

TEST(Csv, QuotingEscapesQuotes) {
  EXPECT_EQ(csv_quote("a\"b,c"), "\"a\"\"b,c\"");
}
