#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace alphaeta {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for the named substream (module, worker) of a master seed.
/// Substreams are a pure function of their key, so results do not depend on
/// how work is spread across threads.
inline constexpr std::uint64_t substream_seed(std::uint64_t master, std::string_view module,
                                              std::uint64_t worker) {
  return splitmix64(splitmix64(master ^ fnv1a(module)) + splitmix64(worker + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t master, std::string_view module, std::uint64_t worker = 0) {
  return Rng(substream_seed(master, module, worker));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline int random_bit(Rng& rng) { return static_cast<int>(rng() >> 63); }

}  // namespace alphaeta
