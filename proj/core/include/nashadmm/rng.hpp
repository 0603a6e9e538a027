#pragma once

#include <cstdint>
#include <random>

namespace nashadmm {

/// Independent stream purposes. The numeric values are part of the
/// reproducibility contract: changing them changes every seeded experiment.
enum class StreamPurpose : std::uint64_t {
  kGameGeneration = 1,
  kInitialization = 2,
  kGraphGeneration = 3,
  kSampling = 4,
  kProbe = 5,
};

/// SplitMix64 finalizer; used to derive well-separated stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// MT19937-64 with a portable uniform mapping.
///
/// std::uniform_real_distribution is implementation-defined, so doubles are
/// produced from the top 53 bits of the engine output instead. Streams are
/// keyed by (seed, purpose, index) so game generation and initialization never
/// share state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index = 0) {
    const auto key = splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(purpose) << 32 ^ index);
    return Rng(splitmix64(key));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased and portable.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nashadmm
