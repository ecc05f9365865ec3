#pragma once

#include <cstdint>

namespace btbs {

// Counter-based stream: every draw is a pure function of
// (seed, stream_id, sample_index, slot), so sample i is addressable without
// sequential generation and partitions reduce deterministically.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

namespace rng {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t sample,
                                  std::uint64_t slot) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ (0xA0761D6478BD642FULL + stream));
  h = splitmix(h ^ (0xE7037ED1A0B428DBULL + sample));
  h = splitmix(h ^ (0x8EBC6AF09C88C6E3ULL + slot));
  return h;
}

// Uniform in (0, 1), never exactly 0 or 1.
inline double uniform01(const RngStream& s, std::uint64_t sample, std::uint64_t slot) {
  std::uint64_t h = counter_hash(s.seed, s.stream_id, sample, slot);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes uniform slots 2*slot and 2*slot+1.
double normal(const RngStream& s, std::uint64_t sample, std::uint64_t slot);

}  // namespace rng
}  // namespace btbs
