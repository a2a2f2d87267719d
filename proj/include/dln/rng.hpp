#pragma once

// Deterministic counter-based random streams.
//
// Every random quantity in the toolkit is derived from an explicit 64-bit
// seed through the SplitMix64 finalizer, so runs are reproducible from the
// seed alone and independent of thread scheduling.  The exact algorithms:
//
//   mix64(z):  z += 0x9E3779B97F4A7C15; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
//              z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31
//   stream draw k of seed s:    mix64(s + (k+1) * 0x9E3779B97F4A7C15)
//   derive_seed(master, index): mix64(master ^ mix64(index + 1))
//   uniform [0,1):              top 53 bits / 2^53
//   Gaussians:                  Box-Muller on consecutive uniform pairs,
//                               u1 shifted into (0,1] before the log
//   unit circle:                exp(2*pi*i*u) with u in (0,1), u=0 rejected

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace dln {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Hash-split of a master seed: statistically independent child streams for
// sample indices, retries, and sub-draws.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 1));
}

// Stateless counter stream: draw k depends only on (seed, k).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    return mix64(seed_ + (counter_++ + 1) * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform on [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Standard normal via Box-Muller; pairs are buffered so consecutive calls
  // consume exactly one uniform pair per two Gaussians.
  double next_gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> next_gauss_complex() {
    const double re = next_gauss();
    const double im = next_gauss();
    return {re, im};
  }

  // Uniform on the unit circle, never exactly 1.
  std::complex<double> next_unit_circle() {
    double u = next_unit();
    while (u == 0.0) u = next_unit();
    const double a = 2.0 * std::numbers::pi * u;
    return {std::cos(a), std::sin(a)};
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace dln
