#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seriation/error.hpp"
#include "seriation/graph.hpp"
#include "seriation/rng.hpp"

namespace seriation {

using Kernel = std::function<double(double, double)>;
using SupportFn = std::function<double(double)>;

/// A symmetric edge-probability kernel on [0,1]^2 with its decay rate and,
/// when known in closed form, the boundaries of each row's support.
struct Graphon {
  Kernel kernel;
  double alpha = 0.0;
  std::optional<SupportFn> support_right;
  std::optional<SupportFn> support_left;
  std::string label;

  double operator()(double x, double y) const { return kernel(x, y); }
};

inline Graphon constant_graphon(double value) {
  require(value >= 0.0 && value <= 1.0, ErrorCode::validation, "constant graphon value must lie in [0,1]");
  return Graphon{[value](double, double) { return value; }, 0.0, std::nullopt, std::nullopt,
                 "constant(" + std::to_string(value) + ")"};
}

struct BoundaryFamilyParams {
  double p = 1.0;
  double alpha = 0.0;
  double r = 0.3;

  void validate() const {
    require(p > 0.0 && p <= 1.0, ErrorCode::validation, "field p must lie in (0,1]");
    require(alpha >= 0.0 && alpha < 1.0, ErrorCode::validation, "field alpha must lie in [0,1)");
    require(r > 0.0 && r < 0.5, ErrorCode::validation, "field r must lie in (0,0.5)");
  }
};

/// w(x,y) = p ((r - |x-y|)/r)^alpha inside the band |x-y| <= r, zero outside.
/// alpha = 0 is the step kernel p * 1{|x-y| <= r}.
inline Graphon make_boundary_family(const BoundaryFamilyParams& params) {
  params.validate();
  const double p = params.p, alpha = params.alpha, r = params.r;
  Kernel kernel = [p, alpha, r](double x, double y) {
    const double d = std::abs(x - y);
    if (d > r) return 0.0;
    if (alpha == 0.0) return p;
    return p * std::pow((r - d) / r, alpha);
  };
  return Graphon{std::move(kernel), alpha, SupportFn([r](double x) { return std::min(1.0, x + r); }),
                 SupportFn([r](double x) { return std::max(0.0, x - r); }),
                 "boundary(p=" + std::to_string(p) + ",alpha=" + std::to_string(alpha) +
                     ",r=" + std::to_string(r) + ")"};
}

/// Draw U_1..U_n and the edge coins from counter-based streams keyed by seed.
inline SampledGraph sample_graph(const Graphon& w, std::size_t n, std::uint64_t seed) {
  require(n >= 1, ErrorCode::empty_input, "cannot sample a graph with zero vertices");
  const rng::Stream positions(seed, "U");
  const rng::Stream coins(seed, "E");

  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = positions.uniform({i, 0});

  // Ties have probability zero but finite precision allows them: redraw the
  // later member of each colliding pair once, and fail on a second collision.
  auto colliding = [&]() {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return u[a] < u[b] || (u[a] == u[b] && a < b); });
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k < n; ++k)
      if (u[idx[k]] == u[idx[k - 1]]) out.push_back(idx[k]);
    return out;
  };
  auto ties = colliding();
  if (!ties.empty()) {
    for (auto i : ties) u[i] = positions.uniform({i, 1});
    require(colliding().empty(), ErrorCode::validation, "latent positions collided twice");
  }

  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coins.uniform({i, j}) < w(u[i], u[j])) g.add_edge(Vertex(i), Vertex(j));
  g.finalize();
  return SampledGraph(std::move(g), seed, std::move(u));
}

namespace detail {

inline constexpr double kSupportTolerance = 1e-9;

inline std::pair<double, double> numeric_support(const Kernel& w, double x, std::size_t grid) {
  require(grid >= 2, ErrorCode::validation, "support search needs a grid of at least 2 points");
  std::vector<double> ys(grid);
  for (std::size_t k = 0; k < grid; ++k) ys[k] = double(k) / double(grid - 1);
  std::optional<std::size_t> first, last;
  for (std::size_t k = 0; k < grid; ++k) {
    if (w(x, ys[k]) > 0.0) {
      if (!first) first = k;
      last = k;
    }
  }
  require(first.has_value(), ErrorCode::degenerate_support, "kernel row is identically zero on the search grid");

  // Bisection keeps lo inside the support and hi outside.
  auto bisect = [&](double inside, double outside) {
    while (std::abs(outside - inside) > kSupportTolerance) {
      const double mid = 0.5 * (inside + outside);
      (w(x, mid) > 0.0 ? inside : outside) = mid;
    }
    return inside;
  };
  const double right = *last + 1 == grid ? 1.0 : bisect(ys[*last], ys[*last + 1]);
  const double left = *first == 0 ? 0.0 : bisect(ys[*first], ys[*first - 1]);
  return {left, right};
}

}  // namespace detail

/// (l(x), r(x)) = (inf, sup) of {y : w(x,y) > 0}. Closed form when the graphon
/// provides it, otherwise a grid scan followed by bisection to 1e-9. Passing
/// a grid size on a closed-form graphon forces the numeric search.
inline std::pair<double, double> support_bounds(const Graphon& w, double x,
                                                std::optional<std::size_t> fallback_grid = std::nullopt) {
  if (w.support_left && w.support_right && !fallback_grid) return {(*w.support_left)(x), (*w.support_right)(x)};
  require(fallback_grid.has_value(), ErrorCode::validation,
          "graphon has no closed-form support; supply a fallback grid size");
  return detail::numeric_support(w.kernel, x, *fallback_grid);
}

/// Grid diagnostics for the Robinson property and the decay / boundary /
/// Holder assumptions. Reports measured values instead of failing.
struct AssumptionReport {
  std::size_t robinson_violation_count = 0;
  double max_robinson_violation = 0.0;
  double holder_M2_estimate = 0.0;
  std::pair<double, double> decay_M0_range{0.0, 0.0};
  std::pair<double, double> decay_M1_range{0.0, 0.0};
  double boundary_B_estimate = 0.0;
  double rho_estimate = 0.0;
  std::size_t grid_size = 0;

  /// Smallest M >= 1 with every observed ratio in [1/M, M].
  static double implied_constant(std::pair<double, double> range) {
    if (range.first <= 0.0) return std::numeric_limits<double>::infinity();
    return std::max({1.0, range.second, 1.0 / range.first});
  }
  double implied_M0() const { return implied_constant(decay_M0_range); }
  double implied_M1() const { return implied_constant(decay_M1_range); }
};

inline AssumptionReport check_assumptions(const Graphon& w, std::size_t grid_size) {
  require(grid_size >= 3, ErrorCode::validation, "grid_size must be at least 3");
  constexpr double tol = 1e-12;
  const std::size_t g = grid_size;
  std::vector<double> xs(g);
  for (std::size_t k = 0; k < g; ++k) xs[k] = double(k) / double(g - 1);
  std::vector<double> W(g * g);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b) W[a * g + b] = w(xs[a], xs[b]);

  AssumptionReport rep;
  rep.grid_size = g;

  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t c = a + 2; c < g; ++c)
      for (std::size_t b = a + 1; b < c; ++b) {
        const double excess = W[a * g + c] - std::min(W[a * g + b], W[b * g + c]);
        if (excess > tol) {
          ++rep.robinson_violation_count;
          rep.max_robinson_violation = std::max(rep.max_robinson_violation, excess);
        }
      }

  auto holder_denominator = [&](double du) { return w.alpha == 0.0 ? 1.0 : std::pow(du, w.alpha); };
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = a + 1; b < g; ++b) {
      const double denom = holder_denominator(xs[b] - xs[a]);
      for (std::size_t v = 0; v < g; ++v)
        rep.holder_M2_estimate = std::max(rep.holder_M2_estimate, std::abs(W[a * g + v] - W[b * g + v]) / denom);
    }

  const std::size_t search_grid = 8 * g + 1;
  std::vector<double> left(g), right(g);
  for (std::size_t k = 0; k < g; ++k) {
    auto [l, r] = (w.support_left && w.support_right) ? support_bounds(w, xs[k]) : support_bounds(w, xs[k], search_grid);
    left[k] = l;
    right[k] = r;
  }

  // rho: the largest candidate with r(x)-x >= rho on [0,1-rho] and x-l(x) >= rho on [rho,1].
  {
    std::vector<double> candidates;
    for (std::size_t k = 0; k < g; ++k) {
      candidates.push_back(right[k] - xs[k]);
      candidates.push_back(xs[k] - left[k]);
    }
    std::sort(candidates.begin(), candidates.end(), std::greater<>());
    for (double rho : candidates) {
      if (!(rho > 0.0 && rho < 0.5)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < g && ok; ++k) {
        if (xs[k] <= 1.0 - rho + tol && right[k] - xs[k] < rho - tol) ok = false;
        if (xs[k] >= rho - tol && xs[k] - left[k] < rho - tol) ok = false;
      }
      if (ok) {
        rep.rho_estimate = rho;
        break;
      }
    }
  }

  auto zpow = [&](double z) { return w.alpha == 0.0 ? 1.0 : std::pow(z, w.alpha); };
  auto update = [](std::pair<double, double>& range, bool& seen, double v) {
    if (!seen) {
      range = {v, v};
      seen = true;
    } else {
      range.first = std::min(range.first, v);
      range.second = std::max(range.second, v);
    }
  };

  const double rho = rep.rho_estimate;
  bool seen0 = false, seen1 = false;
  for (std::size_t k = 0; k < g; ++k) {
    const double x = xs[k];
    for (std::size_t t = 1; t <= g; ++t) {
      const double frac = double(t) / double(g);
      if (x <= 1.0 - rho + tol) {
        const double z = frac * (right[k] - x);
        if (z > tol) update(rep.decay_M0_range, seen0, w(x, right[k] - z) / zpow(z));
      }
      if (x >= rho - tol) {
        const double z = frac * (x - left[k]);
        if (z > tol) update(rep.decay_M0_range, seen0, w(x, left[k] + z) / zpow(z));
      }
    }
  }

  // Parts (3)-(4): x > y at distance d, points near the shared boundary.
  // Samples sitting on the kink z = d are skipped: a discontinuous kernel
  // (alpha = 0) takes either value there depending on rounding.
  auto shifted = [&](double z, double d) { return z <= d ? 0.0 : zpow(z - d); };
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < a; ++b) {
      const double x = xs[a], y = xs[b], d = x - y;
      for (std::size_t t = 1; t <= g; ++t) {
        const double frac = double(t) / double(g);
        if (x <= 1.0 - rho + tol) {
          const double z = frac * (right[a] - x);
          const double denom = zpow(z) - shifted(z, d);
          if (z > tol && denom > 1e-12 && std::abs(z - d) > 1e-9)
            update(rep.decay_M1_range, seen1, (w(x, right[a] - z) - w(y, right[a] - z)) / denom);
        }
        if (y >= rho - tol) {
          const double z = frac * (y - left[b]);
          const double denom = zpow(z) - shifted(z, d);
          if (z > tol && denom > 1e-12 && std::abs(z - d) > 1e-9)
            update(rep.decay_M1_range, seen1, (w(y, left[b] + z) - w(x, left[b] + z)) / denom);
        }
      }
    }

  bool seenB = false;
  for (std::size_t a = 1; a + 1 < g; ++a)
    for (std::size_t b = a + 1; b + 1 < g; ++b) {
      const double ratio = ((right[b] - right[a]) + (left[b] - left[a])) / (xs[b] - xs[a]);
      rep.boundary_B_estimate = seenB ? std::min(rep.boundary_B_estimate, ratio) : ratio;
      seenB = true;
    }
  rep.boundary_B_estimate = std::max(0.0, rep.boundary_B_estimate);
  return rep;
}

}  // namespace seriation
