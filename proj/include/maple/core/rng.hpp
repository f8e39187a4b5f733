#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace maple::core {

// splitmix64 step; used to derive well-mixed child seeds so that per-sample
// streams are independent of iteration order and worker count.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

inline uint64_t derive_seed(uint64_t master, const std::string& tag) {
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return derive_seed(master, h);
}

using Rng = std::mt19937_64;

// Uniform in [0,1). Hand-rolled so draws are identical across standard
// libraries.
inline double runif(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double runif(Rng& rng, double lo, double hi) { return lo + (hi - lo) * runif(rng); }

// Integer in [0, n).
inline uint64_t rint(Rng& rng, uint64_t n) {
  return static_cast<uint64_t>(runif(rng) * static_cast<double>(n)) % n;
}

// Standard normal via Box-Muller.
inline double rnorm(Rng& rng) {
  double u1 = runif(rng);
  double u2 = runif(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace maple::core
