#include "cone/bounds.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace cone {

std::string_view to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Survives: return "Survives";
    case VerdictKind::DiesOut: return "DiesOut";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::SurvivalMean: return "survival_mean";
    case Criterion::ExtinctionMean: return "extinction_mean";
    case Criterion::None: return "none";
  }
  return "?";
}

namespace {

void check_inputs(const RadiusDistribution& dist, int d) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  const double p0 = dist.p0();
  if (!(p0 > 0.0 && p0 < 1.0)) {
    throw std::invalid_argument("radius law must satisfy 0 < P[R = 0] < 1");
  }
}

double clamp_probability(double v) {
  assert(v >= -1e-9 && v <= 1.0 + 1e-9);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

Verdict classify_plus(const RadiusDistribution& dist, int d) {
  check_inputs(dist, d);
  Verdict v;
  v.mean_d_power_r = expected_d_power_r(dist, d);
  v.survival_threshold = 1.0 + dist.p0();
  v.extinction_threshold = 2.0 - 1.0 / d;
  if (tolerant_gt(v.mean_d_power_r, v.survival_threshold)) {
    v.kind = VerdictKind::Survives;
    v.fired = Criterion::SurvivalMean;
  } else if (tolerant_le(v.mean_d_power_r, v.extinction_threshold)) {
    v.kind = VerdictKind::DiesOut;
    v.fired = Criterion::ExtinctionMean;
  }
  return v;
}

SurvivalBounds survival_bounds_plus(const RadiusDistribution& dist, int d) {
  SurvivalBounds b;
  b.graph = Graph::TdPlus;
  b.verdict = classify_plus(dist, d);
  b.rho = smallest_fixed_point(GeneratingFunction(dist, d, Flavor::Lower)).root;
  b.psi = smallest_fixed_point(GeneratingFunction(dist, d, Flavor::Upper)).root;
  b.lower = clamp_probability(1.0 - b.rho);
  b.upper = clamp_probability(1.0 - b.psi);
  return b;
}

SurvivalBounds survival_bounds_full(const RadiusDistribution& dist, int d) {
  SurvivalBounds b = survival_bounds_plus(dist, d);
  b.graph = Graph::Td;
  const double p0 = dist.p0();
  const double lower_scale = static_cast<double>(d + 1) / d;
  const double upper_scale = static_cast<double>(d + 1) / (d - 1);
  const double dd = static_cast<double>(d);

  // With rho = 1 (psi = 1) every power below is exactly 1, so the
  // corresponding endpoint is exactly 0.
  const double lower_expect = expect_bounded(dist, [&](long k) {
    return power(b.rho, lower_scale * std::pow(dd, static_cast<double>(k)));
  });
  const double upper_expect = expect_bounded(dist, [&](long k) {
    return power(b.psi,
                 upper_scale * (std::pow(dd, static_cast<double>(k)) - 1.0));
  });
  b.lower = b.rho == 1.0 ? 0.0
                         : clamp_probability(
                               1.0 - (1.0 - power(b.rho, lower_scale)) * p0 -
                               lower_expect);
  b.upper = b.psi == 1.0 ? 0.0 : clamp_probability(1.0 - upper_expect);
  return b;
}

double bernoulli_exact(double p, int d) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("bernoulli_exact: p must lie in (0, 1)");
  }
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (tolerant_le(ExtendedReal(p * d), 1.0)) return 0.0;
  const auto fp = smallest_fixed_point(
      GeneratingFunction(RadiusDistribution::bernoulli(p), d, Flavor::Upper));
  return p * (1.0 - power(fp.root, d + 1.0));
}

}  // namespace cone
