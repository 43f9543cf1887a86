// seriation: sample graphs, order them, estimate graphons, compute the
// Robinson test statistic and run Monte Carlo sweeps.
//
// Exit codes: 0 success, 2 configuration or input error, 3 every experiment
// cell failed, 1 anything unexpected.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "seriation/harness.hpp"
#include "seriation/io.hpp"
#include "seriation/seriation.hpp"

namespace {

using nlohmann::json;
using namespace seriation;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out;
  std::string graph_path;
  double p = 0.8, alpha = 0.0, r = 0.3;
  std::size_t n = 1000;
  double delta = 0.1, gamma = 0.3, m1 = 1.0, log_factor_scale = 1.0;
  double epsilon = 0.0;  // 0: derive from delta
  std::string policy = "strict";
  std::size_t m = 0;  // 0: default rule
  double mu_exponent = 0.25;
  double mu = 0.0;  // 0: n2^-mu_exponent
  std::size_t stride = 0;
};

/// Flags first, then every key present in --config overrides them.
json merged_config(const CommonFlags& f) {
  json j{{"seed", f.seed},
         {"graphon", {{"family", "boundary"}, {"p", f.p}, {"alpha", f.alpha}, {"r", f.r}}},
         {"n", f.n},
         {"alpha", f.alpha},
         {"delta", f.delta},
         {"gamma", f.gamma},
         {"m1", f.m1},
         {"log_factor_scale", f.log_factor_scale},
         {"policy", f.policy},
         {"mu_exponent", f.mu_exponent}};
  if (f.epsilon > 0) j["epsilon"] = f.epsilon;
  if (f.m > 0) j["m"] = f.m;
  if (f.mu > 0) j["mu"] = f.mu;
  if (f.stride > 0) j["stride"] = f.stride;
  if (!f.out.empty()) j["output_path"] = f.out;
  if (!f.graph_path.empty()) j["graph"] = f.graph_path;
  if (!f.config_path.empty()) {
    std::ifstream in = io::open_in(f.config_path);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::validation, "config " + f.config_path + ": " + e.what());
    }
    require(file.is_object(), ErrorCode::validation, "config must be a JSON object");
    if (file.contains("graphon")) {
      json g = j["graphon"];
      g.update(file["graphon"]);
      file["graphon"] = g;
      if (!file.contains("alpha")) file["alpha"] = g.value("alpha", f.alpha);
    }
    j.update(file);
  }
  return j;
}

OrderingParams ordering_from(const json& j) {
  OrderingParams p;
  p.alpha = j.at("alpha").get<double>();
  p.delta = j.at("delta").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.m1 = j.at("m1").get<double>();
  p.log_factor_scale = j.at("log_factor_scale").get<double>();
  if (j.contains("epsilon") && !j["epsilon"].is_null()) p.epsilon = j["epsilon"].get<double>();
  p.policy = policy_from_string(j.at("policy").get<std::string>());
  p.validate();
  return p;
}

Graph load_graph(const json& j) {
  require(j.contains("graph"), ErrorCode::validation, "--graph <file> is required");
  std::ifstream in = io::open_in(j["graph"].get<std::string>());
  return io::read_graph(in);
}

std::string output_path(const json& j) {
  require(j.contains("output_path"), ErrorCode::validation, "--out <file> is required");
  return j["output_path"].get<std::string>();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out = io::open_out(path);
  out << j.dump(2) << '\n';
}

int cmd_sample(const json& j) {
  const BoundaryFamilyParams bp = io::boundary_params_from_json(j.at("graphon"));
  const std::size_t n = j.at("n").get<std::size_t>();
  const auto seed = j.at("seed").get<std::uint64_t>();
  const SampledGraph sg = sample_graph(make_boundary_family(bp), n, seed);
  const std::string out = output_path(j);
  {
    std::ofstream g = io::open_out(out);
    io::write_graph(g, sg.graph());
  }
  std::ofstream o = io::open_out(out + ".oracle");
  io::write_oracle(o, sg);
  std::printf("sampled n=%zu edges=%zu -> %s (+ .oracle)\n", n, sg.graph().edge_count(), out.c_str());
  return 0;
}

int cmd_order(const json& j) {
  const Graph g = load_graph(j);
  const OrderingParams op = ordering_from(j);
  const StageSchedule s = build_schedule(op.schedule_for(g.size()));
  const RefineResult res = refine_all(g, s, j.at("seed").get<std::uint64_t>());
  const std::string out = output_path(j);
  {
    std::ofstream r = io::open_out(out);
    io::write_ranking(r, res.ranking);
  }
  json sched = io::to_json(s);
  sched["set_sizes"] = res.set_sizes;
  sched["coarse_warnings"] = res.warnings;
  write_json(out + ".schedule.json", sched);
  for (const auto& w : s.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("ordered %zu vertices in %d rounds -> %s\n", g.size(), s.k, out.c_str());
  return 0;
}

int cmd_estimate(const json& j) {
  const Graph g = load_graph(j);
  EstimationParams ep;
  ep.ordering = ordering_from(j);
  ep.m = j.contains("m") ? j["m"].get<std::size_t>()
                         : EstimationParams::default_blocks(g.size(), ep.ordering.alpha, ep.ordering.delta);
  const auto seed = j.at("seed").get<std::uint64_t>();
  const BlockModelEstimate est = estimate_graphon(g, ep, seed);
  const std::string out = output_path(j);
  {
    std::ofstream m = io::open_out(out);
    io::write_matrix(m, est.theta);
  }
  json meta = io::estimate_metadata(est);
  meta["seed"] = seed;
  meta["parameters"] = io::to_json(ep.ordering);
  write_json(out + ".json", meta);
  std::printf("estimated %zu x %zu with m=%zu -> %s\n", g.size(), g.size(), est.m, out.c_str());
  return 0;
}

int cmd_test(const json& j) {
  const Graph g = load_graph(j);
  LambdaParams lp;
  lp.ordering = ordering_from(j);
  const std::size_t n2 = g.size() / 2;
  lp.mu = j.contains("mu") ? j["mu"].get<double>() : std::pow(double(g.size()), -j.at("mu_exponent").get<double>());
  if (j.contains("stride")) lp.stride = j["stride"].get<std::size_t>();
  const auto seed = j.at("seed").get<std::uint64_t>();
  const LambdaReport rep = lambda_statistic(g, lp, seed);
  json out = io::to_json(rep);
  out["seed"] = seed;
  out["parameters"] = io::to_json(lp.ordering);
  out["mu_exponent"] = j.at("mu_exponent");
  write_json(output_path(j), out);
  std::printf("lambda_hat=%.6g (n2=%zu, mu=%.4g, stride=%zu)\n", rep.lambda_hat, n2, rep.mu, rep.stride);
  return 0;
}

int cmd_experiment(const json& j) {
  const ExperimentConfig cfg = ExperimentConfig::from_json(j);
  const std::string out = output_path(j);
  const std::vector<ResultRecord> records = run_experiment(cfg);
  {
    std::ofstream csv = io::open_out(out);
    write_csv(csv, records);
  }
  auto [pts, failures] = medians_by_n(records);
  for (const auto& p : pts) std::printf("n=%-7.0f median %s = %.6g\n", p.n, metric_name(cfg.task), p.error);
  if (pts.size() >= 2) {
    const RateFit fit = fit_rate(pts);
    std::printf("slope %.4f (r^2 %.3f, %zu failed cells excluded)\n", fit.slope, fit.r_squared, failures);
  }
  std::printf("%zu rows -> %s\n", records.size(), out.c_str());
  return 0;
}

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "JSON file; its keys override flags");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--out", f.out, "output file");
}

void add_ordering(CLI::App* app, CommonFlags& f) {
  app->add_option("--graph", f.graph_path, "graph file (n, then 'i j' lines)");
  app->add_option("--alpha", f.alpha, "decay rate alpha in [0,1]");
  app->add_option("--delta", f.delta, "accuracy delta > 0");
  app->add_option("--gamma", f.gamma, "coarse precision gamma in (0,1]");
  app->add_option("--m1", f.m1, "decay constant M1 used in C2");
  app->add_option("--log-factor-scale", f.log_factor_scale, "scale of the log(n) slack factor");
  app->add_option("--epsilon", f.epsilon, "override epsilon (default epsilon_0(delta))");
  app->add_option("--policy", f.policy, "threshold policy: strict or floor_at_one");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seriation of Robinson graphons: ordering, estimation, testing"};
  app.require_subcommand(1);
  CommonFlags f;

  auto* sample = app.add_subcommand("sample", "sample a graph from the boundary family");
  add_common(sample, f);
  sample->add_option("--n", f.n, "vertex count");
  sample->add_option("--p", f.p, "noise rate p in (0,1]");
  sample->add_option("--alpha", f.alpha, "decay rate alpha in [0,1)");
  sample->add_option("--r", f.r, "radius r in (0,0.5)");

  auto* order = app.add_subcommand("order", "order the vertices of a graph");
  add_common(order, f);
  add_ordering(order, f);

  auto* estimate = app.add_subcommand("estimate", "block-model graphon estimate");
  add_common(estimate, f);
  add_ordering(estimate, f);
  estimate->add_option("--m", f.m, "block count (default ceil(n^(1/(alpha+1) - 3 delta)))");

  auto* test = app.add_subcommand("test", "Robinson test statistic");
  add_common(test, f);
  add_ordering(test, f);
  test->add_option("--mu", f.mu, "interval size scale mu (default n^-mu_exponent)");
  test->add_option("--mu-exponent", f.mu_exponent, "mu = n^-mu_exponent");
  test->add_option("--stride", f.stride, "enumeration stride (default max(1, n2/50))");

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo sweep over n and seeds");
  add_common(experiment, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const json j = merged_config(f);
    if (*sample) return cmd_sample(j);
    if (*order) return cmd_order(j);
    if (*estimate) return cmd_estimate(j);
    if (*test) return cmd_test(j);
    if (*experiment) return cmd_experiment(j);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == ErrorCode::all_cells_failed ? 3 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
