#pragma once

#include <cstdint>
#include <random>

namespace deplab {

// Deterministic pseudo-random stream.  Wraps std::mt19937_64, whose output
// sequence is fixed by the standard, and avoids the std distribution objects,
// whose draws are implementation-defined; every derived quantity below is
// specified bit-for-bit so identical seeds give identical results on any
// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0,1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection against a power-of-two mask.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t draw = next_u64() & mask;
      if (draw < bound) return draw;
    }
  }

  // Independent-stream seed derivation (splitmix64 finalizer over the seed
  // offset by the stream index).  Used to give each trial / attempt its own
  // reproducible generator regardless of execution order.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace deplab
