#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cone/environment.hpp"

namespace cone {

/// Lower bound on the probability that the process started at a vertex u at
/// depth j n reaches a fixed descendant v at depth (j + 1) n within n steps:
///
///   prod_{k=0}^{n-1} [ 1 - prod_{i=0}^{k} P[R_{jn+i} < k + 1 - i] ]
///
/// The factor for k is the chance that some vertex on the path at offset
/// i <= k reaches offset k + 1. Depths are indexed jn + i along the path.
double crossing_lower_bound(const HeteroEnvironment& env, int d, long n, long j);

/// d^n times crossing_lower_bound: a lower bound on the mean offspring of
/// the n-block branching process at generation j.
double mean_lower_bound(const HeteroEnvironment& env, int d, long n, long j);

/// Raised when j_max does not cover one full period of the c_j tail.
class HorizonTooShort : public std::invalid_argument {
 public:
  HorizonTooShort(long needed, long given);
  [[nodiscard]] long needed() const { return needed_; }

 private:
  long needed_;
};

struct CertificationReport {
  long n = 1;
  long j_max = 0;
  std::vector<double> c_values;  // c_j for j = 0..j_max
  /// c_j is periodic in j from tail_start on, with period tail_period.
  long tail_start = 0;
  long tail_period = 1;
  /// Minimum of c_j over one tail period; equals liminf c_j exactly.
  double liminf_estimate = 0.0;
  /// liminf > 1: the process survives with positive probability. A false
  /// value proves nothing.
  bool certified = false;
};

/// Evaluates c_j = mean_lower_bound(env, d, n, j) for j = 0..j_max and
/// decides liminf c_j > 1 using the eventual periodicity of the environment.
/// Throws HorizonTooShort if j_max < tail_start + tail_period - 1.
CertificationReport certify_survival(const HeteroEnvironment& env, int d,
                                     long n, long j_max);

struct CertificationSweep {
  std::optional<long> first_certifying_n;
  std::vector<CertificationReport> reports;  // one per n tried, in order
};

/// Tries n = 1..n_max and stops at the first certifying block length.
/// j_max is raised per n to cover one full tail period when needed.
CertificationSweep certify_sweep(const HeteroEnvironment& env, int d,
                                 long n_max, long j_max);

}  // namespace cone
