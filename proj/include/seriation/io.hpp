#pragma once

// Text and JSON formats: graph files, oracle position files, ranking files,
// estimate dumps, schedule / report JSON and the graphon config entry.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "seriation/error.hpp"
#include "seriation/estimation.hpp"
#include "seriation/graph.hpp"
#include "seriation/graphon.hpp"
#include "seriation/ordering.hpp"
#include "seriation/robinson_test.hpp"
#include "seriation/schedule.hpp"

namespace seriation::io {

using nlohmann::json;

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  require(bool(out), ErrorCode::io, "cannot open " + path + " for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), ErrorCode::io, "cannot open " + path);
  return in;
}

// Graph file: first line n, then one "i j" line (0-indexed, i < j) per edge.

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.size() << '\n';
  for (auto [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

inline Graph read_graph(std::istream& in) {
  std::size_t n = 0;
  require(bool(in >> n), ErrorCode::io, "graph file: missing vertex count");
  Graph g(n);
  std::uint64_t i = 0, j = 0;
  std::size_t line = 1;
  while (in >> i) {
    ++line;
    require(bool(in >> j), ErrorCode::io, "graph file: truncated edge on line " + std::to_string(line));
    require(i < j && j < n, ErrorCode::io,
            "graph file: edge " + std::to_string(i) + " " + std::to_string(j) + " needs i < j < n");
    g.add_edge(Vertex(i), Vertex(j));
  }
  require(in.eof(), ErrorCode::io, "graph file: unparsable token after line " + std::to_string(line));
  g.finalize();
  return g;
}

// Oracle file: one latent position per line.

inline void write_oracle(std::ostream& out, const SampledGraph& sg) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double u : oracle_positions(sg)) out << u << '\n';
}

inline std::vector<double> read_oracle(std::istream& in) {
  std::vector<double> u;
  double x = 0.0;
  while (in >> x) u.push_back(x);
  require(in.eof(), ErrorCode::io, "oracle file: unparsable value after entry " + std::to_string(u.size()));
  return u;
}

// Ranking file: "vertex_id rank" per line, in rank order.

inline void write_ranking(std::ostream& out, const Ranking& sigma) {
  for (Rank r = 1; r <= sigma.size(); ++r) out << sigma.at_rank(r) << ' ' << r << '\n';
}

inline Ranking read_ranking(std::istream& in) {
  std::vector<Vertex> ids;
  std::vector<Rank> ranks;
  std::uint64_t v = 0, r = 0;
  while (in >> v >> r) ids.push_back(Vertex(v)), ranks.push_back(Rank(r));
  require(in.eof(), ErrorCode::io, "ranking file: malformed line after entry " + std::to_string(ids.size()));
  return Ranking::from_ranks(ids, ranks);
}

// Estimate dump: one matrix row per line, space separated.

inline void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

inline json to_json(const StageSchedule& s) {
  return json{{"n", s.n},
              {"k", s.k},
              {"epsilon", s.epsilon},
              {"schedule_beta", s.beta},
              {"gamma", s.gamma},
              {"alpha", s.alpha},
              {"m1", s.m1},
              {"log_factor_scale", s.log_factor_scale},
              {"p", s.p},
              {"d", s.d},
              {"d_unclamped", s.d_unclamped},
              {"c1", s.c1},
              {"c2", s.c2},
              {"c3", s.c3},
              {"warnings", s.warnings}};
}

inline json to_json(const ExtensionThresholds& t) {
  return json{{"c1", t.c1}, {"c2", t.c2}, {"c3", t.c3}, {"warnings", t.warnings}};
}

inline json to_json(const OrderingParams& p) {
  json j{{"alpha", p.alpha},
         {"delta", p.delta},
         {"gamma", p.gamma},
         {"m1", p.m1},
         {"log_factor_scale", p.log_factor_scale},
         {"policy", p.policy == ThresholdPolicy::strict ? "strict" : "floor_at_one"}};
  j["epsilon"] = p.epsilon ? json(*p.epsilon) : json(nullptr);
  return j;
}

inline json to_json(const RankInterval& r) { return json::array({r.start, r.last()}); }

inline json to_json(const IntervalTriple& t) {
  return json{{"A", to_json(t.a)}, {"B", to_json(t.b)}, {"C", to_json(t.c)}};
}

inline json to_json(const LambdaReport& rep) {
  return json{{"lambda_hat", rep.lambda_hat},
              {"lambda1_max", rep.lambda1_max},
              {"lambda2_max", rep.lambda2_max},
              {"argmax1", to_json(rep.argmax1)},
              {"argmax2", to_json(rep.argmax2)},
              {"mu", rep.mu},
              {"stride", rep.stride},
              {"n2", rep.n2},
              {"triples", rep.triples},
              {"warnings", rep.warnings}};
}

inline json estimate_metadata(const BlockModelEstimate& est) {
  json splits = json::array();
  for (const auto& s : est.splits)
    splits.push_back(json{{"size", s.part.size()},
                          {"q", s.partition.q},
                          {"block_sizes", s.partition.block_sizes()},
                          {"schedule", to_json(s.schedule)},
                          {"extension", to_json(s.extension)}});
  return json{{"m", est.m}, {"splits", splits}, {"clamp_warnings", est.clamp_warnings}};
}

// Graphon entry {"family":"boundary","p":..,"alpha":..,"r":..}.

inline BoundaryFamilyParams boundary_params_from_json(const json& j) {
  require(j.is_object(), ErrorCode::validation, "graphon entry must be a JSON object");
  const std::string family = j.value("family", std::string("boundary"));
  require(family == "boundary", ErrorCode::validation, "unknown graphon family '" + family + "'");
  BoundaryFamilyParams p;
  p.p = j.value("p", p.p);
  p.alpha = j.value("alpha", p.alpha);
  p.r = j.value("r", p.r);
  p.validate();
  return p;
}

inline json to_json(const BoundaryFamilyParams& p) {
  return json{{"family", "boundary"}, {"p", p.p}, {"alpha", p.alpha}, {"r", p.r}};
}

}  // namespace seriation::io
