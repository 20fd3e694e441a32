#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rvosh/mask.hpp"

// Pixel kernels behind the metrics and toy backends. Every data-parallel
// kernel exists twice: `serial::` is the plain reference kept for testing,
// `parallel::` is the OpenMP version used in production paths. Both must
// produce identical results; tests/test_kernels.cpp checks that.

namespace rvosh {

enum class Execution { Serial, Parallel };

namespace kernels {

/// Squared distance value for "no site anywhere".
inline constexpr std::int64_t kNoSite = std::numeric_limits<std::int64_t>::max();

struct OverlapCounts {
  std::size_t intersection = 0;
  std::size_t united = 0;
  friend bool operator==(const OverlapCounts&, const OverlapCounts&) = default;
};

struct MatchCounts {
  std::size_t matched = 0;
  std::size_t total = 0;
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

/// Union of the 4-connected components of `candidates` that touch `seeds`.
/// Inherently sequential flood fill; shared by both execution modes.
BinaryMask grow_components(const BinaryMask& candidates, const BinaryMask& seeds);

namespace serial {

/// Pixels that are set and have a 4-neighbour that is unset or off-image.
BinaryMask boundary(const BinaryMask& m);
OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b);
/// Exact squared Euclidean distance to the nearest set pixel (kNoSite if none).
std::vector<std::int64_t> squared_distance(const BinaryMask& sites);
/// Set pixels of `points` whose squared distance is within tolerance^2.
MatchCounts count_within(const BinaryMask& points, std::span<const std::int64_t> sq_dist,
                         double tolerance);
/// Chebyshev dilation (radius > 0) or erosion (radius < 0); off-image counts as unset.
BinaryMask morph(const BinaryMask& m, int radius);
/// Pixels whose max-channel absolute difference from `color` is <= tolerance.
BinaryMask color_candidates(const RgbImage& image, const std::array<double, 3>& color,
                            double tolerance);

}  // namespace serial

namespace parallel {

BinaryMask boundary(const BinaryMask& m);
OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b);
std::vector<std::int64_t> squared_distance(const BinaryMask& sites);
MatchCounts count_within(const BinaryMask& points, std::span<const std::int64_t> sq_dist,
                         double tolerance);
BinaryMask morph(const BinaryMask& m, int radius);
BinaryMask color_candidates(const RgbImage& image, const std::array<double, 3>& color,
                            double tolerance);

}  // namespace parallel

// Dispatch helpers.
BinaryMask boundary(const BinaryMask& m, Execution exec);
OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b, Execution exec);
std::vector<std::int64_t> squared_distance(const BinaryMask& sites, Execution exec);
MatchCounts count_within(const BinaryMask& points, std::span<const std::int64_t> sq_dist,
                         double tolerance, Execution exec);
BinaryMask morph(const BinaryMask& m, int radius, Execution exec);
BinaryMask color_candidates(const RgbImage& image, const std::array<double, 3>& color,
                            double tolerance, Execution exec);

}  // namespace kernels
}  // namespace rvosh
