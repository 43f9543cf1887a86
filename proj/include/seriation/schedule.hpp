#pragma once

// Round-by-round parameters of the multistage ordering procedure.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seriation/error.hpp"

namespace seriation {

/// What to do when an integer threshold floors to zero. `strict` raises
/// schedule_degenerate; `floor_at_one` raises it to 1 and records a warning.
enum class ThresholdPolicy { strict, floor_at_one };

/// Left-hand side of the equation fixing epsilon_0(delta):
/// (1/(1+a)) ((1-a)/2)^(k-1) + (2^-k/(1+a)) (1 + 2/(k(1+a))).
inline double epsilon_equation_lhs(int k, double alpha) {
  const double a1 = 1.0 + alpha;
  return std::pow((1.0 - alpha) / 2.0, k - 1) / a1 + std::ldexp(1.0, -k) / a1 * (1.0 + 2.0 / (double(k) * a1));
}

struct EpsilonChoice {
  double epsilon;
  int k;
};

/// The smallest round count k with lhs(k, alpha) <= delta/2, and the largest
/// epsilon that yields it (2^-(k-1), capped at 0.5 so k = 1 reports 0.5).
inline EpsilonChoice epsilon_for_delta(double delta, double alpha) {
  require(delta > 0.0, ErrorCode::validation, "delta must be positive");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::validation, "alpha must lie in [0,1]");
  for (int k = 1; k <= 60; ++k)
    if (epsilon_equation_lhs(k, alpha) <= delta / 2.0) return {std::min(0.5, std::ldexp(1.0, -(k - 1))), k};
  throw Error(ErrorCode::infeasible, "delta=" + std::to_string(delta) + " needs more than 60 rounds");
}

struct ScheduleParams {
  std::size_t n = 0;
  double alpha = 0.0;
  double gamma = 0.3;
  double epsilon = 0.25;
  double m1 = 1.0;
  double log_factor_scale = 1.0;
  std::optional<int> rounds;  // overrides k = floor(-log2 eps) + 1
  ThresholdPolicy policy = ThresholdPolicy::strict;
};

/// Per-round parameters. Vectors p, d have k entries; c1, c2, c3 have one
/// entry per refinement round (k - 1 of them).
struct StageSchedule {
  std::size_t n = 0;
  int k = 1;
  double epsilon = 0.5;
  double beta = 0.0;  // round-spacing exponent ("schedule beta")
  double gamma = 0.3;
  double alpha = 0.0;
  double m1 = 1.0;
  double log_factor_scale = 1.0;
  std::vector<double> p;
  std::vector<double> d;
  std::vector<double> d_unclamped;
  std::vector<std::int64_t> c1, c2, c3;
  std::vector<std::string> warnings;

  int refinement_rounds() const noexcept { return k - 1; }
};

namespace detail {

inline std::int64_t checked_threshold(double value, bool ceil_it, const char* name, int round, ThresholdPolicy policy,
                                      std::vector<std::string>& warnings) {
  const double rounded = ceil_it ? std::ceil(value) : std::floor(value);
  if (rounded >= 1.0) return std::int64_t(rounded);
  const std::string msg = std::string(name) + " of round " + std::to_string(round) + " computes to " +
                          std::to_string(value) + " (< 1)";
  require(policy == ThresholdPolicy::floor_at_one, ErrorCode::schedule_degenerate, msg);
  warnings.push_back(msg + "; raised to 1");
  return 1;
}

}  // namespace detail

inline StageSchedule build_schedule(const ScheduleParams& in) {
  require(in.n >= 8, ErrorCode::validation, "schedule needs n >= 8");
  require(in.alpha >= 0.0 && in.alpha <= 1.0, ErrorCode::validation, "alpha must lie in [0,1]");
  require(in.gamma > 0.0 && in.gamma <= 1.0, ErrorCode::validation, "gamma must lie in (0,1]");
  require(in.epsilon > 0.0 && in.epsilon <= 0.5, ErrorCode::validation, "epsilon must lie in (0,0.5]");
  require(in.m1 > 0.0, ErrorCode::validation, "m1 must be positive");
  require(in.log_factor_scale > 0.0, ErrorCode::validation, "log_factor_scale must be positive");

  StageSchedule s;
  s.n = in.n;
  s.epsilon = in.epsilon;
  s.gamma = in.gamma;
  s.alpha = in.alpha;
  s.m1 = in.m1;
  s.log_factor_scale = in.log_factor_scale;
  s.k = in.rounds ? *in.rounds : int(std::floor(-std::log2(in.epsilon))) + 1;
  require(s.k >= 1, ErrorCode::validation, "round count must be at least 1");
  s.beta = (in.epsilon - std::ldexp(1.0, -s.k)) / double(s.k);
  require(s.beta >= 0.0, ErrorCode::validation, "epsilon is below 2^-k for the requested round count");

  const double n = double(in.n);
  const double a = in.alpha;
  const double logn = std::log(n);
  const double slack = in.log_factor_scale * logn;

  for (int i = 1; i <= s.k; ++i) s.p.push_back(std::pow(n, -double(s.k - i) * s.beta));
  s.p.back() = 1.0;

  s.d_unclamped.push_back(std::pow(n, -in.gamma));
  s.d.push_back(std::min(s.d_unclamped[0], 1.0 / (slack * slack)));
  if (s.d[0] < s.d_unclamped[0])
    s.warnings.push_back("d1 clamped from " + std::to_string(s.d_unclamped[0]) + " to " + std::to_string(s.d[0]));
  for (int i = 1; i < s.k; ++i) {
    const double prev = s.d.back();
    const double raw = std::pow(n * s.p[std::size_t(i - 1)], -0.5) * std::pow(prev, (1.0 - a) / 2.0) * slack * slack;
    s.d_unclamped.push_back(raw);
    s.d.push_back(std::min(raw, prev / 2.0));
    if (raw > prev / 2.0)
      s.warnings.push_back("d" + std::to_string(i + 1) + " clamped from " + std::to_string(raw) + " to " +
                           std::to_string(prev / 2.0));
  }

  for (int i = 0; i + 1 < s.k; ++i) {
    const double np = n * s.p[std::size_t(i)];
    const double d = s.d[std::size_t(i)];
    const int round = i + 1;
    s.c1.push_back(detail::checked_threshold(np * d * logn, true, "C1", round, in.policy, s.warnings));
    s.c2.push_back(detail::checked_threshold(std::sqrt(np) * std::pow(d, (1.0 + a) / 2.0) / (6.0 * in.m1), false,
                                             "C2", round, in.policy, s.warnings));
    s.c3.push_back(detail::checked_threshold(std::pow(np, (1.0 - a) / 2.0) * std::pow(d, (1.0 - a * a) / 2.0) *
                                                 std::pow(logn, 1.0 + a) / (2.0 * (1.0 + a)),
                                             false, "C3", round, in.policy, s.warnings));
    const double lhs = double(s.c2.back()) / 2.0;
    const double rhs = std::sqrt(double(s.c1.back())) * logn + logn * logn;
    if (lhs < rhs)
      s.warnings.push_back("round " + std::to_string(round) + ": C2/2 = " + std::to_string(lhs) +
                           " < sqrt(C1) log n + log^2 n = " + std::to_string(rhs));
  }
  return s;
}

/// Thresholds for extending an ordering of an n_sub-vertex training part to
/// the whole n-vertex graph in one single-stage call.
struct ExtensionThresholds {
  std::int64_t c1 = 1, c2 = 1, c3 = 1;
  std::vector<std::string> warnings;
};

inline ExtensionThresholds extension_thresholds(std::size_t n_total, std::size_t n_sub, double alpha, double delta,
                                                double m1 = 1.0, ThresholdPolicy policy = ThresholdPolicy::strict) {
  require(n_total >= 2 && n_sub >= 1 && n_sub <= n_total, ErrorCode::validation, "invalid extension sizes");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::validation, "alpha must lie in [0,1]");
  require(delta > 0.0, ErrorCode::validation, "delta must be positive");
  const double n = double(n_total), nr = double(n_sub), a = alpha;
  const double logn = std::log(n);
  ExtensionThresholds t;
  t.c1 = detail::checked_threshold(nr * std::pow(n, -1.0 / (1.0 + a) + delta) * logn, true, "C1'", 1, policy,
                                   t.warnings);
  t.c2 = detail::checked_threshold(std::sqrt(nr) * std::pow(n, -0.5 + delta * (1.0 + a) / 2.0) / (6.0 * m1), false,
                                   "C2'", 1, policy, t.warnings);
  t.c3 = detail::checked_threshold(std::pow(nr, (1.0 - a) / 2.0) *
                                       std::pow(n, -(1.0 - a) / 2.0 + delta * (1.0 - a * a) / 2.0) *
                                       std::pow(logn, 1.0 + a) / (2.0 * (1.0 + a)),
                                   false, "C3'", 1, policy, t.warnings);
  return t;
}

}  // namespace seriation
