#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace superres {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective mixer on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent child seed for stream `counter` of `master`. Depends only on
/// the pair, so trials can run in any order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

/// Uniform draw on the open complex disc of the given radius.
inline std::complex<double> uniform_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(r, theta);
}

}  // namespace superres
