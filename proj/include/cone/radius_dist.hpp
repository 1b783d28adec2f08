#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cone/extended_real.hpp"
#include "cone/rng.hpp"

namespace cone {

/// Thrown by parse_dist. `position` is the 0-based offset in the input.
class DistSyntaxError : public std::invalid_argument {
 public:
  DistSyntaxError(const std::string& what, std::size_t position);
  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Law of the radius of influence R over {0, 1, 2, ...}.
///
/// Parametric families follow these conventions:
///   Bernoulli(p):    P[R = 1] = p, P[R = 0] = 1 - p
///   Geometric(p):    P[R = k] = (1 - p) p^k
///   Binomial(n, p):  P[R = k] = C(n, k) p^k (1 - p)^(n - k)
///   Pmf(w):          P[R = k] = w_k / sum(w)
///
/// Values are immutable after construction and may be shared between threads.
/// Constructors accept p_0 in {0, 1}; the percolation engines reject it.
class RadiusDistribution {
 public:
  enum class Family { Bernoulli, Geometric, Binomial, Pmf };

  static RadiusDistribution bernoulli(double p);
  static RadiusDistribution geometric(double p);
  static RadiusDistribution binomial(int n, double p);
  /// Weights are normalized; a warning goes to stderr when their raw sum is
  /// more than 1e-9 away from 1.
  static RadiusDistribution explicit_pmf(std::vector<double> weights);

  [[nodiscard]] Family family() const { return family_; }
  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] int trials() const { return n_; }
  /// Normalized point masses for finite-support laws (empty for Geometric).
  [[nodiscard]] std::span<const double> masses() const { return masses_; }

  /// Largest k with P[R = k] > 0 may be at most this; nullopt for Geometric.
  [[nodiscard]] std::optional<long> max_support() const;
  [[nodiscard]] double p0() const { return pmf_at(0); }
  [[nodiscard]] double pmf_at(long k) const;
  /// P[R > k].
  [[nodiscard]] double tail_above(long k) const;

  friend bool operator==(const RadiusDistribution&,
                         const RadiusDistribution&) = default;

 private:
  RadiusDistribution() = default;

  Family family_ = Family::Pmf;
  double p_ = 0.0;
  int n_ = 0;
  std::vector<double> masses_;
  std::vector<double> cumulative_;

  friend double cdf(const RadiusDistribution&, long);
  friend long sample(const RadiusDistribution&, Rng&);
};

/// P[R = k]; zero outside the support.
double pmf(const RadiusDistribution& dist, long k);
/// P[R <= k]; zero for k < 0.
double cdf(const RadiusDistribution& dist, long k);
/// One draw by inversion of a single uniform.
long sample(const RadiusDistribution& dist, Rng& rng);
/// R from a given uniform u in [0, 1). Same inversion as sample().
long quantile(const RadiusDistribution& dist, double u);
/// E[d^R], or +infinity when the series diverges.
ExtendedReal expected_d_power_r(const RadiusDistribution& dist, int d);

/// Parses `family:key=value,...` (see README for the grammar).
RadiusDistribution parse_dist(std::string_view spec);
/// Canonical text form; parse_dist(format_dist(x)) == x.
std::string format_dist(const RadiusDistribution& dist);

/// Tail-bounded expectation E[f(R)] for f with values in [0, 1].
///
/// Infinite supports are truncated once P[R > K] falls below kSeriesTail,
/// which bounds the absolute truncation error.
inline constexpr double kSeriesTail = 1e-16;

template <class F>
double expect_bounded(const RadiusDistribution& dist, F&& f) {
  double sum = 0.0;
  if (auto last = dist.max_support()) {
    for (long k = 0; k <= *last; ++k) {
      const double w = dist.pmf_at(k);
      if (w > 0.0) sum += w * f(k);
    }
    return sum;
  }
  for (long k = 0;; ++k) {
    sum += dist.pmf_at(k) * f(k);
    if (dist.tail_above(k) < kSeriesTail) break;
  }
  return sum;
}

}  // namespace cone
