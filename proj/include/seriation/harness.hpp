#pragma once

// Monte Carlo sweeps over (n, seed) for the ordering, estimation and test
// tasks, CSV output, and log-log rate fits.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seriation/error.hpp"
#include "seriation/error_rooting.hpp"
#include "seriation/estimation.hpp"
#include "seriation/graphon.hpp"
#include "seriation/io.hpp"
#include "seriation/ordering.hpp"
#include "seriation/robinson_test.hpp"
#include "seriation/schedule.hpp"

namespace seriation {

enum class Task { order, estimate, test };

inline const char* to_string(Task t) {
  switch (t) {
    case Task::order: return "order";
    case Task::estimate: return "estimate";
    case Task::test: return "test";
  }
  return "unknown";
}

inline Task task_from_string(const std::string& s) {
  if (s == "order") return Task::order;
  if (s == "estimate") return Task::estimate;
  if (s == "test") return Task::test;
  throw Error(ErrorCode::validation, "unknown task '" + s + "' (expected order, estimate or test)");
}

inline ThresholdPolicy policy_from_string(const std::string& s) {
  if (s == "strict") return ThresholdPolicy::strict;
  if (s == "floor_at_one") return ThresholdPolicy::floor_at_one;
  throw Error(ErrorCode::validation, "unknown threshold policy '" + s + "' (expected strict or floor_at_one)");
}

struct ExperimentConfig {
  Task task = Task::order;
  BoundaryFamilyParams graphon{};
  std::vector<std::size_t> n_grid;
  std::vector<std::uint64_t> seeds;
  OrderingParams ordering{};  // ordering.alpha defaults to the graphon's alpha
  std::optional<std::size_t> m;       // estimate: fixed m instead of ceil(n^(1/(a+1) - 3 delta))
  double mu_exponent = 0.25;          // test: mu = n^-mu_exponent
  std::optional<std::size_t> stride;  // test: default max(1, floor(n2/50))
  std::string output_path;

  void validate() const {
    graphon.validate();
    require(!n_grid.empty(), ErrorCode::validation, "n_grid must not be empty");
    require(std::is_sorted(n_grid.begin(), n_grid.end()) &&
                std::adjacent_find(n_grid.begin(), n_grid.end()) == n_grid.end(),
            ErrorCode::validation, "n_grid must be strictly ascending");
    require(!seeds.empty(), ErrorCode::validation, "seeds must not be empty");
    ordering.validate();
    require(mu_exponent > 0.0 && mu_exponent < 1.0, ErrorCode::validation, "mu_exponent must lie in (0,1)");
    require(!stride || *stride >= 1, ErrorCode::validation, "stride must be at least 1");
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
      c.task = task_from_string(j.value("task", std::string("order")));
      if (j.contains("graphon")) c.graphon = io::boundary_params_from_json(j.at("graphon"));
      c.n_grid = j.value("n_grid", std::vector<std::size_t>{});
      c.seeds = j.value("seeds", std::vector<std::uint64_t>{});
      c.ordering.alpha = j.value("alpha", c.graphon.alpha);
      c.ordering.delta = j.value("delta", c.ordering.delta);
      c.ordering.gamma = j.value("gamma", c.ordering.gamma);
      c.ordering.m1 = j.value("m1", c.ordering.m1);
      c.ordering.log_factor_scale = j.value("log_factor_scale", c.ordering.log_factor_scale);
      if (j.contains("epsilon") && !j.at("epsilon").is_null()) c.ordering.epsilon = j.at("epsilon").get<double>();
      c.ordering.policy = policy_from_string(j.value("policy", std::string("strict")));
      if (j.contains("m") && !j.at("m").is_null()) c.m = j.at("m").get<std::size_t>();
      c.mu_exponent = j.value("mu_exponent", c.mu_exponent);
      if (j.contains("stride") && !j.at("stride").is_null()) c.stride = j.at("stride").get<std::size_t>();
      c.output_path = j.value("output_path", std::string());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::validation, std::string("config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

struct ResultRecord {
  Task task = Task::order;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string metric;  // "failed" on failure rows
  std::optional<double> value;
  double wall_ms = 0.0;
  std::vector<std::string> warnings;
  nlohmann::json params;

  bool failed() const noexcept { return !value.has_value(); }
};

inline const char* metric_name(Task t) {
  switch (t) {
    case Task::order: return "normalized_error";
    case Task::estimate: return "mse";
    case Task::test: return "lambda_hat";
  }
  return "value";
}

/// One (n, seed) cell: sample, run the task, evaluate against the oracle.
inline ResultRecord run_cell(const ExperimentConfig& cfg, std::size_t n, std::uint64_t seed) {
  ResultRecord rec;
  rec.task = cfg.task;
  rec.n = n;
  rec.seed = seed;
  rec.params = nlohmann::json{{"graphon", io::to_json(cfg.graphon)}, {"ordering", io::to_json(cfg.ordering)}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Graphon w = make_boundary_family(cfg.graphon);
    const SampledGraph sg = sample_graph(w, n, seed);
    switch (cfg.task) {
      case Task::order: {
        const StageSchedule s = build_schedule(cfg.ordering.schedule_for(n));
        RefineResult res = refine_all(sg.graph(), s, seed);
        rec.value = double(ordering_error(res.ranking, oracle_true_ranking(sg))) / double(n);
        rec.warnings = s.warnings;
        rec.warnings.insert(rec.warnings.end(), res.warnings.begin(), res.warnings.end());
        rec.params["schedule"] = io::to_json(s);
        rec.params["set_sizes"] = res.set_sizes;
        break;
      }
      case Task::estimate: {
        EstimationParams ep;
        ep.ordering = cfg.ordering;
        ep.m = cfg.m ? *cfg.m : EstimationParams::default_blocks(n, cfg.ordering.alpha, cfg.ordering.delta);
        const BlockModelEstimate est = estimate_graphon(sg.graph(), ep, seed);
        rec.value = oracle_estimation_loss(est.theta, sg, w).mse;
        rec.warnings = est.clamp_warnings;
        rec.params["estimate"] = io::estimate_metadata(est);
        break;
      }
      case Task::test: {
        LambdaParams lp;
        lp.ordering = cfg.ordering;
        lp.mu = std::pow(double(n), -cfg.mu_exponent);
        lp.stride = cfg.stride;
        const LambdaReport rep = lambda_statistic(sg.graph(), lp, seed);
        rec.value = rep.lambda_hat;
        rec.warnings = rep.warnings;
        rec.params["report"] = io::to_json(rep);
        rec.params["report"].erase("warnings");
        rec.params["mu_exponent"] = cfg.mu_exponent;
        break;
      }
    }
    rec.metric = metric_name(cfg.task);
  } catch (const Error& e) {
    rec.metric = "failed";
    rec.value.reset();
    rec.warnings = {e.what()};
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// All cells in (n, seed) order. Throws all_cells_failed when nothing succeeds.
inline std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ResultRecord> out;
  for (std::size_t n : cfg.n_grid)
    for (std::uint64_t seed : cfg.seeds) out.push_back(run_cell(cfg, n, seed));
  const bool any_ok = std::any_of(out.begin(), out.end(), [](const ResultRecord& r) { return !r.failed(); });
  require(any_ok, ErrorCode::all_cells_failed,
          "every cell failed; first error: " + (out.front().warnings.empty() ? "" : out.front().warnings.front()));
  return out;
}

inline std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline void write_csv(std::ostream& out, std::span<const ResultRecord> records) {
  out << "task,n,seed,metric,value,wall_ms,warnings,params_json\n";
  char buf[64];
  for (const auto& r : records) {
    std::string warnings;
    for (std::size_t k = 0; k < r.warnings.size(); ++k) warnings += (k ? " | " : "") + r.warnings[k];
    std::string value;
    if (r.value) {
      std::snprintf(buf, sizeof buf, "%.17g", *r.value);
      value = buf;
    }
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
    out << to_string(r.task) << ',' << r.n << ',' << r.seed << ',' << r.metric << ',' << value << ',' << buf << ','
        << csv_quote(warnings) << ',' << csv_quote(r.params.dump()) << '\n';
  }
}

struct RatePoint {
  double n = 0.0;
  double error = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log n, log error)
  std::size_t replaced_zeros = 0;
  std::size_t excluded_failures = 0;
};

/// OLS slope of log(error) on log(n). Non-positive errors become
/// zero_floor(n) (default 1/n) and are counted in replaced_zeros.
inline RateFit fit_rate(std::span<const RatePoint> pts,
                        const std::function<double(double)>& zero_floor = [](double n) { return 1.0 / n; }) {
  RateFit fit;
  for (const auto& p : pts) {
    if (!(p.n > 0.0) || !std::isfinite(p.error)) continue;
    double e = p.error;
    if (e <= 0.0) e = zero_floor(p.n), ++fit.replaced_zeros;
    fit.points.emplace_back(std::log(p.n), std::log(e));
  }
  require(fit.points.size() >= 2, ErrorCode::validation, "rate fit needs at least 2 usable points");
  const double k = double(fit.points.size());
  double mx = 0, my = 0;
  for (auto [x, y] : fit.points) mx += x, my += y;
  mx /= k, my /= k;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : fit.points) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my), syy += (y - my) * (y - my);
  require(sxx > 0.0, ErrorCode::validation, "rate fit needs at least 2 distinct n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

inline double median(std::vector<double> v) {
  require(!v.empty(), ErrorCode::empty_input, "median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Per-n medians of the successful rows, plus how many rows failed.
inline std::pair<std::vector<RatePoint>, std::size_t> medians_by_n(std::span<const ResultRecord> records) {
  std::map<std::size_t, std::vector<double>> by_n;
  std::size_t failures = 0;
  for (const auto& r : records) {
    if (r.failed()) {
      ++failures;
      continue;
    }
    by_n[r.n].push_back(*r.value);
  }
  std::vector<RatePoint> pts;
  for (auto& [n, vals] : by_n) pts.push_back({double(n), median(vals)});
  return {pts, failures};
}

inline RateFit fit_records(std::span<const ResultRecord> records) {
  auto [pts, failures] = medians_by_n(records);
  RateFit fit = fit_rate(pts);
  fit.excluded_failures = failures;
  return fit;
}

}  // namespace seriation
