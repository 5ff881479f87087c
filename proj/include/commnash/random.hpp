#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace commnash {

// The engine's sampling and the generators only use raw 64-bit draws so that
// streams are identical across standard library implementations.
using Rng = std::mt19937_64;

// Uniform double in [0,1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// SplitMix64 finalizer, used to derive independent seeds from one base seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Inverse-CDF draw from a vector of non-negative weights summing to ~1.
std::size_t draw_index(const std::vector<double>& cumulative, Rng& rng);
std::vector<double> cumulative_weights(const std::vector<double>& probs);

}  // namespace commnash
