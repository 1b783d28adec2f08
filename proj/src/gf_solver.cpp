#include "cone/gf_solver.hpp"

#include <cmath>
#include <limits>

namespace cone {

namespace {

constexpr long kMaxIterations = 1'000'000;
constexpr double kStepTolerance = 1e-14;
constexpr double kResidualTolerance = 1e-12;

void require_nondegenerate(const RadiusDistribution& dist) {
  const double p0 = dist.p0();
  if (!(p0 > 0.0 && p0 < 1.0)) {
    throw std::invalid_argument("radius law must satisfy 0 < P[R = 0] < 1");
  }
}

}  // namespace

GeneratingFunction::GeneratingFunction(RadiusDistribution dist, int d,
                                       Flavor flavor)
    : dist_(std::move(dist)), d_(d), flavor_(flavor) {
  if (d < 2) throw std::invalid_argument("generating function: d must be >= 2");
}

double GeneratingFunction::exponent(long k) const {
  const double dk = std::pow(static_cast<double>(d_), static_cast<double>(k));
  if (flavor_ == Flavor::Lower) return dk;
  if (k == 0) return 0.0;
  return d_ * (dk - 1.0) / (d_ - 1);
}

ExtendedReal GeneratingFunction::mean() const {
  const ExtendedReal m = expected_d_power_r(dist_, d_);
  if (flavor_ == Flavor::Lower) return m - dist_.p0();
  return (static_cast<double>(d_) / (d_ - 1)) * (m - 1.0);
}

double power(double s, double e) {
  if (e == 0.0) return 1.0;
  if (s == 1.0) return 1.0;
  if (s == 0.0) return 0.0;
  const double v = std::exp(e * std::log(s));
  return std::isfinite(v) ? v : 0.0;
}

double eval_gf(const GeneratingFunction& gf, double s) {
  if (s >= 1.0) return 1.0;
  const RadiusDistribution& dist = gf.dist();
  if (gf.flavor() == Flavor::Lower) {
    // E[s^(d^R)] + (1 - s) p_0 with the k = 0 terms p_0 s - p_0 s cancelled.
    return dist.p0() + expect_bounded(dist, [&](long k) {
             return k == 0 ? 0.0 : power(s, gf.exponent(k));
           });
  }
  return expect_bounded(dist, [&](long k) { return power(s, gf.exponent(k)); });
}

double eval_gf_derivative(const GeneratingFunction& gf, double s) {
  const RadiusDistribution& dist = gf.dist();
  double sum = 0.0;
  auto term = [&](long k) {
    if (k == 0) return 0.0;  // constant term in both flavors
    const double e = gf.exponent(k);
    if (s >= 1.0) return e;
    const double pw = power(s, e - 1.0);
    return pw == 0.0 ? 0.0 : e * pw;
  };
  if (auto last = dist.max_support()) {
    for (long k = 1; k <= *last; ++k) sum += dist.pmf_at(k) * term(k);
    return sum;
  }
  // Terms are not bounded by 1 here; stop once both the mass and the term
  // have become negligible.
  for (long k = 1; k < 100'000; ++k) {
    const double t = term(k);
    if (!std::isfinite(t)) return std::numeric_limits<double>::infinity();
    sum += dist.pmf_at(k) * t;
    if (dist.tail_above(k) < kSeriesTail && (t == 0.0 || s >= 1.0)) break;
  }
  return sum;
}

FixedPointResult smallest_fixed_point(const GeneratingFunction& gf) {
  require_nondegenerate(gf.dist());
  FixedPointResult result;
  if (tolerant_le(gf.mean(), 1.0)) {
    result.root = 1.0;
    result.residual = 0.0;
    result.is_supercritical = false;
    return result;
  }

  double s = 0.0;
  long it = 0;
  for (; it < kMaxIterations; ++it) {
    const double next = eval_gf(gf, s);
    const double step = next - s;
    s = next;
    if (std::fabs(step) < kStepTolerance) {
      ++it;
      break;
    }
  }

  // Newton polish on f(s) = phi(s) - s. At the smallest root of a
  // supercritical PGF, phi'(s) < 1.
  const double slope = eval_gf_derivative(gf, s) - 1.0;
  if (std::isfinite(slope) && slope < 0.0) {
    const double polished = s - (eval_gf(gf, s) - s) / slope;
    if (polished >= 0.0 && polished < 1.0 &&
        std::fabs(eval_gf(gf, polished) - polished) <=
            std::fabs(eval_gf(gf, s) - s)) {
      s = polished;
    }
  }

  result.root = s;
  result.iterations = it;
  result.residual = std::fabs(eval_gf(gf, s) - s);
  result.is_supercritical = s < 1.0;
  if (result.residual > kResidualTolerance) {
    throw ConvergenceError("fixed-point iteration did not converge: residual " +
                           std::to_string(result.residual) + " after " +
                           std::to_string(it) + " iterations");
  }
  return result;
}

double extinction_by_generation(const GeneratingFunction& gf, long g) {
  double q = 0.0;
  for (long i = 0; i < g; ++i) {
    const double next = eval_gf(gf, q);
    if (next == q) break;
    q = next;
  }
  return q;
}

}  // namespace cone
