#pragma once

#include <cstdint>
#include <random>

namespace safegrid {

/// Deterministic random source with explicit distribution maps.
///
/// std::mt19937_64 has a fully specified output sequence, but the standard
/// distributions do not. All draws here go through our own maps so that a
/// (seed, call sequence) pair produces identical numbers on every build.
/// Substreams are derived from the original seed, never from generator
/// state, so one stream's consumption cannot perturb another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

  /// Independent substream for the given id (env / agent / s2c / explore).
  Rng stream(std::uint64_t stream_id) const {
    return Rng(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1))));
  }

  std::uint64_t next() { return gen_(); }

  /// Uniform integer in [0, n). Lemire multiply-shift map.
  int uniform_int(int n) {
    return static_cast<int>(
        (static_cast<unsigned __int128>(next()) * static_cast<std::uint64_t>(n)) >> 64);
  }

  /// Uniform double in [0, 1) with 53 bits of randomness.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t seed() const { return seed_; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace safegrid
