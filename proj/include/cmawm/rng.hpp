#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "cmawm/numerics.hpp"

namespace cmawm {

/// Seedable stream: xoshiro256** seeded through splitmix64, normals from the
/// Box-Muller transform (both values of each pair are used, in order).
///
/// The same seed yields the same draw sequence on every IEEE-754 platform
/// with a conforming libm.
class RandomStream {
 public:
  static constexpr std::string_view kGenerator = "xoshiro256**/splitmix64-seed v1";
  static constexpr std::string_view kNormalTransform = "box-muller-pair v1";

  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Consumes exactly one uniform. Throws std::domain_error for p outside [0, 1].
  bool bernoulli(double p);

  double standard_normal();

  Vector standard_normal_vector(Eigen::Index n);

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace cmawm
