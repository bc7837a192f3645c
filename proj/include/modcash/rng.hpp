#pragma once

#include <cstdint>
#include <random>

namespace modcash {

using Rng = std::mt19937_64;

// splitmix64 step, used to mix seed components into independent streams
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4da2db97f4a7cULL;
  return x ^ (x >> 31);
}

inline std::uint64_t seed_hash(std::uint64_t a) { return mix64(a); }

template <typename... Rest>
std::uint64_t seed_hash(std::uint64_t a, Rest... rest) {
  return mix64(a ^ seed_hash(static_cast<std::uint64_t>(rest)...));
}

}  // namespace modcash
