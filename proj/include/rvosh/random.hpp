#pragma once

#include <cstdint>
#include <string_view>

namespace rvosh {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for one (video, expression, purpose) stream. Results keyed this
/// way do not depend on the order items are processed in.
Seed derive_seed(Seed parent, std::string_view video_id, std::string_view expression_id,
                 std::string_view purpose);

/// Counter-based generator: value i of the stream is mix64(key + i * golden),
/// so any draw can be recomputed from (seed, counter) alone.
class CounterRng {
 public:
  explicit CounterRng(Seed seed) : key_(mix64(seed.value)) {}

  std::uint64_t at(std::uint64_t counter) const {
    return mix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
  }
  std::uint64_t next() { return at(counter_++); }

  /// Uniform integer in [0, bound) by rejection sampling. bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return to_unit(next()); }
  double uniform01_at(std::uint64_t counter) const { return to_unit(at(counter)); }

 private:
  static double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rvosh
