#pragma once

#include <cstddef>
#include <istream>
#include <string_view>
#include <vector>

#include "cone/radius_dist.hpp"

namespace cone {

/// How depths past the explicit prefix are filled in.
struct TailRule {
  enum class Kind { ConstantLast, Periodic };
  Kind kind = Kind::ConstantLast;
  /// For Periodic: the last `period` prefix entries repeat forever.
  std::size_t period = 1;

  static TailRule constant() { return {}; }
  static TailRule periodic(std::size_t k) { return {Kind::Periodic, k}; }

  friend bool operator==(const TailRule&, const TailRule&) = default;
};

/// Depth-indexed family of radius laws R_z, z = 0, 1, 2, ...
class HeteroEnvironment {
 public:
  /// Throws std::invalid_argument on an empty prefix, a bad period, or any
  /// depth with P[R_z = 0] = 1.
  HeteroEnvironment(std::vector<RadiusDistribution> prefix, TailRule tail);

  /// Environment with the same law at every depth.
  static HeteroEnvironment homogeneous(RadiusDistribution dist);

  [[nodiscard]] const RadiusDistribution& at(std::size_t depth) const;
  [[nodiscard]] const std::vector<RadiusDistribution>& prefix() const {
    return prefix_;
  }
  [[nodiscard]] const TailRule& tail() const { return tail_; }

  /// First depth from which at(z + period) == at(z) holds for all z.
  [[nodiscard]] std::size_t periodic_from() const;
  [[nodiscard]] std::size_t period() const;

 private:
  std::vector<RadiusDistribution> prefix_;
  TailRule tail_;
};

/// Line-oriented environment file: one distribution spec per depth, optional
/// final line `tail: constant` or `tail: periodic=<k>`. Blank lines and lines
/// starting with '#' are skipped.
HeteroEnvironment parse_environment(std::istream& in);
HeteroEnvironment parse_environment(std::string_view text);

}  // namespace cone
