#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ossf {
namespace rng {

// SplitMix64 finalizer: a bijective mixer on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: the value at position k of stream (seed, stream_id)
// is a pure function of (seed, stream_id, k), so parallel generation and
// batch-vs-single generation agree bit for bit.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(mix64(seed ^ mix64(stream_id))) {}

  std::uint64_t next_u64() { return mix64(key_ ^ counter_++); }

  // Uniform in (0, 1), never exactly 0.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; generated in deterministic pairs.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rng
}  // namespace ossf
