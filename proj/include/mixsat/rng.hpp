#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace mixsat {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent, reproducible substream for (seed, stream) pairs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

using Rng = std::mt19937_64;

// Fills `out` with a point drawn uniformly from the unit sphere.
inline void sample_sphere(Rng& rng, std::span<double> out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    double norm2 = 0.0;
    for (auto& x : out) {
      x = gauss(rng);
      norm2 += x * x;
    }
    if (norm2 > 1e-300) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& x : out) x *= inv;
      return;
    }
  }
}

}  // namespace mixsat
