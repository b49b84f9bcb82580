#pragma once

#include <cmath>
#include <cstdint>

namespace bondgauge {

namespace detail {

// splitmix64 finalizer; also used to hash stream labels together.
inline std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ 0x2545f4914f6cdd1dULL;
  std::uint64_t h = splitmix64_step(s);
  s ^= b + 0x632be59bd9b4e019ULL;
  h ^= splitmix64_step(s);
  return h;
}

}  // namespace detail

/// Deterministic splittable PRNG stream producing standard normal deviates
/// via Box-Muller. Each stream is single-owner; derive independent streams
/// with `split` or `for_replication` instead of sharing one.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for Monte Carlo replication `rep` of cell `cell`.
  static GaussianStream for_replication(std::uint64_t seed, std::uint64_t cell, std::uint64_t rep) {
    return GaussianStream(detail::mix(detail::mix(seed, cell), rep));
  }

  /// Child stream labeled by `label`, independent of further draws from this one.
  GaussianStream split(std::uint64_t label) const { return GaussianStream(detail::mix(state_, ~label)); }

  std::uint64_t next_u64() { return detail::splitmix64_step(state_); }

  /// Uniform on [0, 1).
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate.
  double next() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const double u1 = 1.0 - next_uniform();  // (0, 1], keeps log finite
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(kTwoPi * u2);
    have_cached_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace bondgauge
