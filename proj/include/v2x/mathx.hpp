#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace v2x {

// Complementary error function, accurate to ~1e-13 relative over the range we
// need (|x| <= ~27). Own implementation so the inverse below has a single,
// fully controlled forward model.
double erfc(double x);

// Inverse of erfc on (0, 2). Absolute accuracy 1e-9 or better.
// Throws std::domain_error outside the open interval.
double inv_erfc(double x);

// RNG helpers. All randomness in the library flows through these so that
// streams are reproducible independent of the standard library's
// distribution implementations.
inline double rng_u01(std::mt19937_64& rng) {
  // 53-bit mantissa, uniform in [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(rng_u01(rng) * static_cast<double>(n)) % n;
}

inline double rng_exp(std::mt19937_64& rng, double mean) {
  return -mean * std::log(1.0 - rng_u01(rng));
}

// Poisson draw: Knuth product method for small mean, Hormann's PTRS
// transformed rejection for large mean.
std::uint64_t rng_poisson(std::mt19937_64& rng, double mean);

inline double sq(double x) { return x * x; }
inline double cube(double x) { return x * x * x; }

inline constexpr double kEulerGamma = 0.5772156649015328606;

}  // namespace v2x
