#pragma once

#include <cstdint>
#include <random>

namespace essns {

// All stochastic code draws through the helpers below instead of the
// std:: distributions, whose output is implementation-defined; a seed must
// reproduce a run bit-for-bit on any platform.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

// Independent stream (e.g. one per prediction step) derived from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// Uniform in [0,1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + uniform01(rng) * (hi - lo);
}

// Uniform over {lo, ..., hi}. Rounding bias is far below 2^-40 for the small
// ranges used here.
inline int uniform_int(Rng& rng, int lo, int hi) {
  const int v = lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
  return v > hi ? hi : v;
}

}  // namespace essns
