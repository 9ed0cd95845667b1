#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace lesbox {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel or reordered traversal cannot change
// the sampled values.
struct CounterRng {
  std::uint64_t seed = 0;

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    return mix(mix(mix(seed) ^ stream) ^ counter);
  }

  // Uniform in (0, 1]; never returns 0 so it is log-safe.
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    const std::uint64_t u = bits(stream, counter) >> 11;
    return (static_cast<double>(u) + 1.0) * 0x1p-53;
  }

  // Standard normal pair (Box-Muller) from two decorrelated streams.
  std::pair<double, double> normal_pair(std::uint64_t stream,
                                        std::uint64_t counter) const {
    const double u1 = uniform(stream * 2 + 1, counter);
    const double u2 = uniform(stream * 2 + 2, counter);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }
};

} // namespace lesbox
