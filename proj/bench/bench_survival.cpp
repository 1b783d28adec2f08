// Times the serial reference against the OpenMP estimator on the same
// configuration and checks that both produce the same estimate.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "cone/radius_dist.hpp"
#include "cone/tree_sim.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const unsigned long runs = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20000;

  struct Case {
    const char* label;
    cone::Graph graph;
    int d;
    cone::RadiusDistribution dist;
  };
  const Case cases[] = {
      {"td d=2 bernoulli:p=0.7", cone::Graph::Td, 2, cone::RadiusDistribution::bernoulli(0.7)},
      {"td d=3 binomial:n=2,p=0.4", cone::Graph::Td, 3, cone::RadiusDistribution::binomial(2, 0.4)},
      {"tdplus d=2 geometric:p=0.35", cone::Graph::TdPlus, 2, cone::RadiusDistribution::geometric(0.35)},
  };

  std::printf("threads available: %d, runs per case: %lu\n", omp_get_max_threads(), runs);
  std::printf("%-30s %10s %10s %8s %s\n", "case", "serial_s", "openmp_s", "speedup", "agree");
  bool all_agree = true;
  for (const auto& c : cases) {
    cone::SimulationConfig cfg;
    cfg.graph = c.graph;
    cfg.d = c.d;
    cfg.source = c.dist;
    cfg.policy = cone::StopPolicy{40, 160, 2048};
    cfg.n_runs = runs;
    cfg.master_seed = 2024;

    cone::SurvivalEstimate serial, parallel;
    const double ts = seconds([&] { serial = cone::estimate_survival_serial(cfg); });
    const double tp = seconds([&] { parallel = cone::estimate_survival(cfg); });
    const bool agree = serial == parallel;
    all_agree = all_agree && agree;
    std::printf("%-30s %10.3f %10.3f %8.2f %s\n", c.label, ts, tp, ts / tp, agree ? "yes" : "NO");
  }
  return all_agree ? 0 : 1;
}
