#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

namespace cone {

/// Non-negative real number or +infinity.
///
/// Carries quantities such as E[d^R] which diverge for heavy-tailed radius
/// laws. Infinity is stored as an IEEE infinity, so ordering and addition with
/// finite values follow the usual extended-real conventions.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v) {}

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  [[nodiscard]] bool is_infinite() const { return std::isinf(value_); }
  [[nodiscard]] bool is_finite() const { return !is_infinite(); }
  [[nodiscard]] constexpr double value() const { return value_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    return ExtendedReal(a.value_ + b.value_);
  }
  friend ExtendedReal operator-(ExtendedReal a, double b) {
    return ExtendedReal(a.value_ - b);
  }
  friend ExtendedReal operator*(double a, ExtendedReal b) {
    return ExtendedReal(a * b.value_);
  }
  friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) {
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.value_ == b.value_;
  }

  [[nodiscard]] std::string to_string() const;

 private:
  double value_ = 0.0;
};

/// Relative slack used when comparing a computed quantity against a
/// closed-form threshold. Values within the slack count as equal.
inline constexpr double kTieTolerance = 1e-12;

/// a <= b, treating values within kTieTolerance (relative) as ties.
inline bool tolerant_le(ExtendedReal a, double b) {
  if (a.is_infinite()) return false;
  const double scale = std::fmax(1.0, std::fabs(b));
  return a.value() <= b + kTieTolerance * scale;
}

/// a > b strictly, beyond the tie slack.
inline bool tolerant_gt(ExtendedReal a, double b) { return !tolerant_le(a, b); }

}  // namespace cone
