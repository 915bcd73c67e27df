#pragma once

#include <cmath>
#include <cstdint>

#include "bbrad/constants.hpp"
#include "bbrad/errors.hpp"

namespace bbrad {

// Deterministic splittable generator built on the splitmix64 mixer.
// Streams are keyed by (seed, stream); distinct keys give statistically
// independent sequences, each with period 2^64. Used for every Monte Carlo
// path so that runs are bit-reproducible and parallelizable by key.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) {
    state_ = mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0xbf58476d1ce4e5b9ULL));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [-1, 1].
  double uniform_sym() { return 2.0 * uniform() - 1.0; }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw domain_error("CounterRng::exponential: rate must be positive");
    return -std::log(uniform_pos()) / rate;
  }

  // Standard normal (Box-Muller, cosine branch).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * constants::pi * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

} // namespace bbrad
