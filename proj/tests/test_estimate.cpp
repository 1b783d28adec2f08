#include <doctest.h>

#include <cmath>

#include "cone/bounds.hpp"
#include "cone/stats.hpp"
#include "cone/tree_sim.hpp"

using cone::Graph;
using cone::RadiusDistribution;

TEST_CASE("Wilson interval") {
  const auto ci = cone::wilson_interval(50, 100);
  CHECK(ci.point == 0.5);
  // Textbook value for 50/100 at z = 1.96.
  CHECK(ci.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(ci.high == doctest::Approx(0.5962).epsilon(1e-3));
  const auto zero = cone::wilson_interval(0, 10'000);
  CHECK(zero.low == 0.0);
  CHECK(zero.high < 0.001);
  const auto all = cone::wilson_interval(10, 10);
  CHECK(all.high == 1.0);
  CHECK(all.low < 1.0);
  CHECK_THROWS(cone::wilson_interval(0, 0));
  CHECK_THROWS(cone::wilson_interval(3, 2));
  for (std::uint64_t k = 0; k <= 37; ++k) {
    const auto c = cone::wilson_interval(k, 37);
    CHECK(c.low <= c.point);
    CHECK(c.point <= c.high);
  }
}

TEST_CASE("R = 0 never survives") {
  cone::SimulationConfig cfg;
  cfg.source = RadiusDistribution::explicit_pmf({1.0});
  cfg.n_runs = 10'000;
  const auto est = cone::estimate_survival(cfg);
  CHECK(est.point == 0.0);
  CHECK(est.ci_high < 0.001);
  CHECK(est.frontier_died == 10'000);
}

TEST_CASE("parallel kernel equals the serial reference bit for bit") {
  cone::SimulationConfig cfg;
  cfg.graph = Graph::Td;
  cfg.d = 3;
  cfg.source = RadiusDistribution::geometric(0.3);
  cfg.policy = {12, 48, 1 << 11};
  cfg.n_runs = 3000;
  cfg.master_seed = 2718;
  const auto serial = cone::estimate_survival_serial(cfg);
  for (int threads : {1, 2, 3, 8}) {
    cfg.threads = threads;
    CHECK(cone::estimate_survival(cfg) == serial);
  }
  cfg.threads = 8;
  CHECK(cone::estimate_survival(cfg) == cone::estimate_survival(cfg));
  cfg.master_seed = 2719;
  CHECK_FALSE(cone::estimate_survival(cfg) == serial);
}

TEST_CASE("estimate on T_d brackets the exact Bernoulli value") {
  cone::SimulationConfig cfg;
  cfg.graph = Graph::Td;
  cfg.d = 2;
  cfg.source = RadiusDistribution::bernoulli(0.7);
  cfg.policy = {40, 160, 2048};
  cfg.n_runs = 20'000;
  cfg.master_seed = 1;
  const auto est = cone::estimate_survival(cfg);
  const double exact = cone::bernoulli_exact(0.7, 2);
  CHECK(est.ci_low <= exact);
  CHECK(exact <= est.ci_high);
  CHECK(est.ci_low <= est.point);
  CHECK(est.point <= est.ci_high);
}

TEST_CASE("T_d^+ estimate does not exceed the T_d estimate") {
  for (double p : {0.6, 0.75}) {
    cone::SimulationConfig cfg;
    cfg.d = 2;
    cfg.source = RadiusDistribution::bernoulli(p);
    cfg.policy = {30, 120, 2048};
    cfg.n_runs = 10'000;
    cfg.master_seed = 5;
    cfg.graph = Graph::TdPlus;
    const auto plus = cone::estimate_survival(cfg);
    cfg.graph = Graph::Td;
    const auto full = cone::estimate_survival(cfg);
    const double slack = (plus.ci_high - plus.ci_low) + (full.ci_high - full.ci_low);
    CHECK(plus.point <= full.point + slack);
    // And both sit inside their bound intervals.
    const auto bp = cone::survival_bounds_plus(RadiusDistribution::bernoulli(p), 2);
    CHECK(plus.ci_low <= bp.upper);
    CHECK(bp.lower <= plus.ci_high);
  }
}

TEST_CASE("Binomial(4, 1/2) estimate overlaps the printed interval") {
  cone::SimulationConfig cfg;
  cfg.graph = Graph::Td;
  cfg.d = 2;
  cfg.source = RadiusDistribution::binomial(4, 0.5);
  cfg.policy = {40, 160, 2048};
  cfg.n_runs = 100'000;
  cfg.master_seed = 3;
  const auto est = cone::estimate_survival(cfg);
  CHECK(est.ci_low <= 0.937435962);
  CHECK(0.937435919 <= est.ci_high);
}

TEST_CASE("estimate rejects empty campaigns") {
  cone::SimulationConfig cfg;
  cfg.n_runs = 0;
  CHECK_THROWS_AS(cone::estimate_survival(cfg), std::invalid_argument);
  CHECK_THROWS_AS(cone::estimate_survival_serial(cfg), std::invalid_argument);
}
