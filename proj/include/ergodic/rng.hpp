#pragma once

#include <cstdint>
#include <random>

namespace ergodic {

/// splitmix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Named random stream. The engine is std::mt19937_64 (fully specified by the
// standard); the conversions to doubles and bounded integers are done here
// rather than through <random> distributions, whose algorithms are
// implementation-defined. Outputs are therefore identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (lo, hi]; matches the half-open window convention.
  double uniform_left_open(double lo, double hi) { return hi - (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n > 0 (multiply-shift, bias < 2^-64 * n).
  std::uint64_t below(std::uint64_t n) {
    __extension__ using wide = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<wide>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ergodic
