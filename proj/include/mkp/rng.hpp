#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace mkp {

// SplitMix64 (Vigna / Steele et al.): a 64-bit counter generator with a
// strong output mix. Small state, trivially seedable, and every value is a
// pure function of (seed, step) — which is what the reproducibility
// contract of the scan module needs.
struct SplitMix64 {
  std::uint64_t state;

  explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform double in [0, 1), 53 mantissa bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform double in (0, 1]; safe as a log() argument
  double uniform01_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Per-trial seed derivation: trial seeds are independent pure functions of
// (master, index), so trials can run in any order or in parallel and still
// reproduce bit-for-bit.
inline constexpr std::uint64_t derive_seed(std::uint64_t master,
                                           std::uint64_t index) {
  SplitMix64 g(master + 0x9e3779b97f4a7c15ULL * (index + 1));
  return g.next();
}

// One Box-Muller pair of independent standard normals.
inline std::pair<double, double> gaussian_pair(SplitMix64& g) {
  const double two_pi = 6.283185307179586476925286766559;
  double u1 = g.uniform01_open();
  double u2 = g.uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

}  // namespace mkp
