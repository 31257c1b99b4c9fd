// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace satrrm {

/// Deterministic 64-bit generator: xorshift64* (Vigna's variant of
/// Marsaglia's xorshift, multiplier 0x2545F4914F6CDD1D), seeded through one
/// splitmix64 step so that seed 0 yields a valid nonzero state.
///
/// The recurrence is part of the file-format contract: a fixed seed must
/// reproduce the same scenario on every platform, so nothing here may be
/// swapped for an implementation-defined <random> engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0x9e3779b97f4a7c15ULL;
  }

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  /// Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Log-uniform on [lo, hi]; requires lo > 0.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Uniform integer in [0, n) via Lemire's multiply-shift reduction.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller; consumes two draws.
  double normal() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi() * u2);
  }

  /// Unit-magnitude complex number with uniform phase.
  std::complex<double> unit_phase() {
    double th = uniform(0.0, two_pi());
    return {std::cos(th), std::sin(th)};
  }

 private:
  static constexpr double two_pi() { return 6.283185307179586476925286766559; }

  static std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace satrrm
