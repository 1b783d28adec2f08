#include "cone/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace cone {

ProportionInterval wilson_interval(std::uint64_t successes,
                                   std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  if (successes > trials) {
    throw std::invalid_argument("wilson_interval: successes exceed trials");
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  ProportionInterval out;
  out.point = phat;
  // Clamp the rounding at the edges so low <= point <= high always holds.
  out.low = successes == 0 ? 0.0 : std::fmin(phat, std::fmax(0.0, centre - half));
  out.high = successes == trials ? 1.0
                                 : std::fmax(phat, std::fmin(1.0, centre + half));
  return out;
}

}  // namespace cone
