#pragma once

#include <array>
#include <cstdint>

namespace gapinfo {

/// xoshiro256** 1.0 seeded through splitmix64. Chosen over std:: engines plus
/// std:: distributions because the latter are not specified bit-for-bit.
class Xoshiro256StarStar {
 public:
  static constexpr const char* kName = "xoshiro256**-1.0/splitmix64";

  explicit Xoshiro256StarStar(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double standard_normal();
  /// Marsaglia-Tsang, with the U^(1/a) boost for shape < 1.
  double gamma(double shape);

 private:
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Stream seed for substream `index` of a user seed (used per restart).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace gapinfo
