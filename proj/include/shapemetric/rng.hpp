// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace shapemetric {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for an independent stream; identical inputs give identical seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> streams) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t s : streams) h = splitmix64(h ^ splitmix64(s + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform double in the closed interval [0, 1].
inline double uniform_closed(Rng& rng) {
  constexpr std::uint64_t kMax = (std::uint64_t{1} << 53) - 1;
  std::uniform_int_distribution<std::uint64_t> dist(0, kMax);
  return static_cast<double>(dist(rng)) / static_cast<double>(kMax);
}

/// Uniform double in [0, 1).
inline double uniform_open(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace shapemetric
