// Sample a graph from the boundary family, order it, and compare the
// recovered order against the hidden latent positions.

#include <cstdio>

#include "seriation/seriation.hpp"

int main() {
  using namespace seriation;
  const Graphon w = make_boundary_family({.p = 0.8, .alpha = 0.0, .r = 0.3});
  const SampledGraph sg = sample_graph(w, 1000, 42);

  ScheduleParams sp;
  sp.n = sg.size();
  sp.epsilon = 0.25;
  sp.m1 = 0.03;
  sp.policy = ThresholdPolicy::floor_at_one;
  const StageSchedule schedule = build_schedule(sp);

  const RefineResult result = refine_all(sg.graph(), schedule, 42);
  const Ranking truth = oracle_true_ranking(sg);
  std::printf("rounds %d, ordering error %zu of n = %zu\n", schedule.k, ordering_error(result.ranking, truth),
              sg.size());
  for (const auto& warning : schedule.warnings) std::printf("  schedule: %s\n", warning.c_str());
}
