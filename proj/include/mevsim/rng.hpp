#pragma once

#include <cstdint>
#include <random>

namespace mevsim {

// splitmix64 step; used for seed expansion and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seedable deterministic generator (mt19937_64 core, whose output sequence
// is fixed by the standard). Substreams are derived from the root seed and a
// stream id, so adding draws to one stream never shifts another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    engine_.seed(splitmix64(s));
  }

  Rng substream(std::uint64_t stream_id) const {
    std::uint64_t s = seed_ ^ (0xd1342543de82ef95ull * (stream_id + 1));
    return Rng(splitmix64(s));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [lo, hi); 53-bit mapping straight from engine output,
  // independent of any library distribution implementation.
  double uniform(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mevsim
