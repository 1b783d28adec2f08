#pragma once

#include <cstdint>

namespace cone {

struct ProportionInterval {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials` Bernoulli draws.
ProportionInterval wilson_interval(std::uint64_t successes,
                                   std::uint64_t trials, double z = kZ95);

}  // namespace cone
