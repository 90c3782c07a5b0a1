#include "gapinfo/random.hpp"

#include <cmath>
#include <numbers>

#include "gapinfo/dist_core.hpp"

namespace gapinfo {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  const std::uint64_t base = splitmix64(s);
  std::uint64_t t = base ^ (index * 0xd1b54a32d192ed03ULL);
  return splitmix64(t);
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Xoshiro256StarStar::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Xoshiro256StarStar::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double Xoshiro256StarStar::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

double Xoshiro256StarStar::standard_normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Marsaglia polar method.
  double x, y, r2;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    r2 = x * x + y * y;
  } while (r2 >= 1.0 || r2 == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_normal_ = y * scale;
  has_spare_normal_ = true;
  return x * scale;
}

double Xoshiro256StarStar::gamma(double shape) {
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

TripartiteDistribution dirichlet_sample(const Shape& shape, double concentration,
                                        std::uint64_t seed) {
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw Error(ErrorCode::NonPositiveConcentration,
                "concentration must be positive, got " + std::to_string(concentration));
  }
  if (!shape.valid()) {
    throw Error(ErrorCode::ShapeMismatch, "non-positive size in shape " + to_string(shape));
  }
  Xoshiro256StarStar rng(seed);
  TripartiteDistribution::Vector draws(shape.cells());
  double total = 0.0;
  // Tiny concentrations can underflow every draw to zero; redraw in that case.
  do {
    for (auto& g : draws) g = rng.gamma(concentration);
    total = draws.sum();
  } while (!(total > 0.0));
  draws /= total;
  return TripartiteDistribution::validate(std::move(draws), shape);
}

}  // namespace gapinfo
