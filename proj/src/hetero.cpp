#include "cone/hetero.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cone/radius_dist.hpp"

namespace cone {

namespace {

void check_args(int d, long n) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (n < 1) throw std::invalid_argument("block length n must be >= 1");
}

// First j and period (in j) from which c_j repeats.
std::pair<long, long> tail_of_c(const HeteroEnvironment& env, long n) {
  const auto start = static_cast<long>(env.periodic_from());
  const auto period = static_cast<long>(env.period());
  const long j0 = (start + n - 1) / n;
  const long pj = period / std::gcd(n, period);
  return {j0, pj};
}

}  // namespace

double crossing_lower_bound(const HeteroEnvironment& env, int d, long n, long j) {
  check_args(d, n);
  if (j < 0) throw std::invalid_argument("block index j must be >= 0");
  const auto base = static_cast<std::size_t>(j) * static_cast<std::size_t>(n);
  double product = 1.0;
  for (long k = 0; k < n; ++k) {
    double all_short = 1.0;
    for (long i = 0; i <= k; ++i) {
      // P[R < k + 1 - i] = P[R <= k - i]
      all_short *= cdf(env.at(base + static_cast<std::size_t>(i)), k - i);
    }
    product *= 1.0 - all_short;
  }
  return product;
}

double mean_lower_bound(const HeteroEnvironment& env, int d, long n, long j) {
  return std::pow(static_cast<double>(d), static_cast<double>(n)) *
         crossing_lower_bound(env, d, n, j);
}

HorizonTooShort::HorizonTooShort(long needed, long given)
    : std::invalid_argument("j_max = " + std::to_string(given) +
                            " does not cover a full tail period; need j_max >= " +
                            std::to_string(needed)),
      needed_(needed) {}

CertificationReport certify_survival(const HeteroEnvironment& env, int d,
                                     long n, long j_max) {
  check_args(d, n);
  if (j_max < 1) throw std::invalid_argument("j_max must be >= 1");
  const auto [j0, pj] = tail_of_c(env, n);
  const long needed = j0 + pj - 1;
  if (j_max < needed) throw HorizonTooShort(needed, j_max);

  CertificationReport report;
  report.n = n;
  report.j_max = j_max;
  report.tail_start = j0;
  report.tail_period = pj;
  report.c_values.reserve(static_cast<std::size_t>(j_max) + 1);
  for (long j = 0; j <= j_max; ++j) {
    report.c_values.push_back(mean_lower_bound(env, d, n, j));
  }
  report.liminf_estimate = *std::min_element(
      report.c_values.begin() + j0, report.c_values.begin() + j0 + pj);
  report.certified = report.liminf_estimate > 1.0;
  return report;
}

CertificationSweep certify_sweep(const HeteroEnvironment& env, int d,
                                 long n_max, long j_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  CertificationSweep sweep;
  for (long n = 1; n <= n_max; ++n) {
    const auto [j0, pj] = tail_of_c(env, n);
    sweep.reports.push_back(
        certify_survival(env, d, n, std::max(j_max, j0 + pj - 1)));
    if (sweep.reports.back().certified) {
      sweep.first_certifying_n = n;
      break;
    }
  }
  return sweep;
}

}  // namespace cone
