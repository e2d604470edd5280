#pragma once

// Deterministic randomness helpers. mt19937_64 is fully specified by the
// standard and the uniforms below avoid std::uniform_real_distribution, whose
// output is implementation-defined, so streams are identical across
// platforms and standard libraries.

#include <cstdint>
#include <random>

namespace ecdvqe {

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent sub-stream seed derived from a base seed and a counter.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ull * (salt + 1));
}

}  // namespace ecdvqe
