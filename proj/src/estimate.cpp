// Episode-level Monte Carlo kernels: the OpenMP version and the serial
// reference it is tested against.
#include <omp.h>

#include <algorithm>

#include "cone/tree_sim.hpp"

namespace cone {

namespace {

struct Tally {
  std::uint64_t reached = 0;
  std::uint64_t died = 0;
  std::uint64_t capped = 0;

  void add(Outcome o) {
    switch (o) {
      case Outcome::ReachedDepth: ++reached; break;
      case Outcome::FrontierDied: ++died; break;
      case Outcome::CapHit: ++capped; break;
    }
  }
};

SurvivalEstimate summarize(const Tally& t, std::uint64_t n_runs) {
  SurvivalEstimate est;
  est.n_runs = n_runs;
  est.reached_depth = t.reached;
  est.frontier_died = t.died;
  est.cap_hits = t.capped;
  const auto ci = wilson_interval(t.reached + t.capped, n_runs);
  est.point = ci.point;
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

void check(const SimulationConfig& config) {
  if (config.n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  config.policy.validate();
}

int thread_count(int requested) {
  return requested > 0 ? requested : omp_get_max_threads();
}

}  // namespace

SurvivalEstimate estimate_survival_serial(const SimulationConfig& config) {
  check(config);
  EpisodeRunner runner(config.graph, config.d, config.source, config.policy);
  Tally t;
  for (std::uint64_t i = 0; i < config.n_runs; ++i) {
    Rng rng = Rng::for_episode(config.master_seed, i);
    t.add(runner.run(rng).outcome);
  }
  return summarize(t, config.n_runs);
}

SurvivalEstimate estimate_survival(const SimulationConfig& config) {
  check(config);
  const auto n = static_cast<long long>(config.n_runs);
  std::uint64_t reached = 0;
  std::uint64_t died = 0;
  std::uint64_t capped = 0;
#pragma omp parallel num_threads(thread_count(config.threads)) \
    reduction(+ : reached, died, capped)
  {
    EpisodeRunner runner(config.graph, config.d, config.source, config.policy);
#pragma omp for schedule(dynamic, 64)
    for (long long i = 0; i < n; ++i) {
      Rng rng = Rng::for_episode(config.master_seed, static_cast<std::uint64_t>(i));
      switch (runner.run(rng).outcome) {
        case Outcome::ReachedDepth: ++reached; break;
        case Outcome::FrontierDied: ++died; break;
        case Outcome::CapHit: ++capped; break;
      }
    }
  }
  return summarize(Tally{reached, died, capped}, config.n_runs);
}

ProportionInterval estimate_crossing(const RadiusSource& source, int d,
                                     std::size_t start_depth, long n,
                                     std::uint64_t n_runs,
                                     std::uint64_t master_seed, int threads) {
  if (n < 1) throw std::invalid_argument("crossing: n must be >= 1");
  const auto runs = static_cast<long long>(n_runs);
  std::uint64_t hits = 0;
#pragma omp parallel for num_threads(thread_count(threads)) \
    schedule(dynamic, 64) reduction(+ : hits)
  for (long long i = 0; i < runs; ++i) {
    Rng rng = Rng::for_episode(master_seed, static_cast<std::uint64_t>(i));
    if (run_crossing_episode(source, d, start_depth, n, rng)) ++hits;
  }
  return wilson_interval(hits, n_runs);
}

}  // namespace cone
