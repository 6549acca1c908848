#ifndef MLSGC_RANDOM_HPP
#define MLSGC_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mlsgc {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Combines a root seed with a list of coordinates into a child seed.
/// The result depends only on the values, never on call order or thread.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = mix64(root);
  for (std::uint64_t c : coords) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform draw on [0, 1) with 53 random bits. Implemented here rather than via
/// std::uniform_real_distribution so streams are identical across standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw on the open interval (0, 1).
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace mlsgc

#endif  // MLSGC_RANDOM_HPP
