#pragma once

// Deterministic random streams. A (seed, stream) pair is whitened through
// splitmix64 into an mt19937_64 state, so substreams derived from one user
// seed never overlap. Gaussians come from Box-Muller on top of 53-bit
// uniforms; std::normal_distribution is avoided because its output is
// implementation defined and would break byte-for-byte reproducibility
// across standard libraries.

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>

namespace mmf {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed for the k-th substream of a user seed.
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t seed,
                                                  std::uint64_t stream) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : eng_(stream_seed(seed, stream)) {}

  // uniform on [0, 1), 53 random bits
  [[nodiscard]] double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // standard normal, Box-Muller with cached spare
  [[nodiscard]] double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mmf
