#pragma once

#include <stdexcept>

#include "cone/extended_real.hpp"
#include "cone/radius_dist.hpp"

namespace cone {

/// Which auxiliary branching process a generating function describes.
///
/// Lower (X): P[X = 0] = p_0, P[X = d^k] = p_k for k >= 1; it is dominated by
/// the frontier growth. Upper (Y): P[Y = d(d^k - 1)/(d - 1)] = p_k for k >= 0;
/// it dominates the frontier growth.
enum class Flavor { Lower, Upper };

/// Offspring generating function of X or Y for radius law `dist` on T_d.
class GeneratingFunction {
 public:
  GeneratingFunction(RadiusDistribution dist, int d, Flavor flavor);

  [[nodiscard]] const RadiusDistribution& dist() const { return dist_; }
  [[nodiscard]] int d() const { return d_; }
  [[nodiscard]] Flavor flavor() const { return flavor_; }

  /// Offspring count attached to radius k (as a real; may be +inf for huge k).
  /// For Lower, k = 0 maps to 1 to match E[s^(d^R)]; the (1 - s) p_0 term
  /// then turns that mass into offspring count 0.
  [[nodiscard]] double exponent(long k) const;

  /// Mean offspring E[X] = E[d^R] - p_0 or E[Y] = d/(d-1) (E[d^R] - 1).
  [[nodiscard]] ExtendedReal mean() const;

 private:
  RadiusDistribution dist_;
  int d_;
  Flavor flavor_;
};

struct FixedPointResult {
  double root = 1.0;
  long iterations = 0;
  double residual = 0.0;
  bool is_supercritical = false;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// s^e with 0^0 = 1, computed as exp(e log s) and flushed to 0 on underflow.
double power(double s, double e);

/// phi(s) for s in [0, 1]; phi(1) is exactly 1.
double eval_gf(const GeneratingFunction& gf, double s);

/// phi'(s) for s in [0, 1). Returns +inf when the series diverges.
double eval_gf_derivative(const GeneratingFunction& gf, double s);

/// Smallest fixed point of phi on [0, 1].
///
/// Iterates s <- phi(s) from 0, which climbs monotonically to the smallest
/// fixed point, then applies one Newton step. When the mean offspring is at
/// most 1 the root is 1 and is returned without iterating, since the iterates
/// approach 1 only sublinearly at criticality.
///
/// Throws std::invalid_argument unless 0 < p_0 < 1, and ConvergenceError if
/// the residual exceeds 1e-12 after 10^6 iterations.
FixedPointResult smallest_fixed_point(const GeneratingFunction& gf);

/// g-th iterate of phi from 0: probability the process is extinct by
/// generation g.
double extinction_by_generation(const GeneratingFunction& gf, long g);

}  // namespace cone
