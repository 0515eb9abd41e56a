#pragma once

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "mdl/error.hpp"

namespace mdl {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent generator derived from (master seed, stream id). Used to split
// one run seed into isolated component streams.
inline Rng substream(std::uint64_t master, std::uint64_t stream_id) {
  return Rng(splitmix64(splitmix64(master) ^ splitmix64(stream_id + 0x632BE59BD9B4E019ULL)));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
  return splitmix64(splitmix64(master) + 0xD1B54A32D192ED03ULL * (stream_id + 1));
}

// Stream ids of one game-dynamics run.
enum class Stream : std::uint64_t {
  learner_sampling = 0,
  auditor_sampling = 1,
  learner_algorithm = 2,
  auditor_algorithm = 3,
};

inline Rng substream(std::uint64_t master, Stream s) {
  return substream(master, static_cast<std::uint64_t>(s));
}

// Uniform double in [0, 1) with 53 random bits. Portable across standard
// libraries, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t uniform_index(std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgument("uniform_index: empty range");
  auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return i < n ? i : n - 1;
}

// Draws an index with probability proportional to weights (nonnegative,
// positive total). Linear scan; zero-weight entries are never returned.
inline std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw InvalidArgument("sample_index: weights have no mass");
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

inline double standard_normal(Rng& rng) {
  // Box-Muller on the portable uniform source.
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238 * u2);
}

}  // namespace mdl
