#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rdclass {

/// mt19937_64 with distributions derived from raw output bits, so sequences
/// are identical across standard libraries (std::uniform_real_distribution
/// is not specified bit-exactly).
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard exponential; normalized exponentials give a uniform point on
  /// the simplex.
  double exponential() { return -std::log1p(-uniform()); }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Seed for an independent substream (SplitMix64 finalizer of seed + index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rdclass
