#include <algorithm>

#include "kernels_detail.hpp"
#include "rvosh/error.hpp"
#include "rvosh/kernels.hpp"

namespace rvosh::kernels::parallel {
namespace {

// Below this many pixels the fork/join cost outweighs the work.
constexpr std::size_t kMinParallelPixels = 1 << 14;

}  // namespace

BinaryMask boundary(const BinaryMask& m) {
  BinaryMask out(m.height(), m.width());
  const bool big = m.size() >= kMinParallelPixels;
#pragma omp parallel for schedule(static) if (big)
  for (int y = 0; y < m.height(); ++y) detail::boundary_row(m, out, y);
  return out;
}

OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw DimensionMismatch("overlap: shape mismatch");
  const auto pa = a.bits();
  const auto pb = b.bits();
  const auto n = static_cast<long long>(pa.size());
  std::size_t inter = 0;
  std::size_t uni = 0;
#pragma omp parallel for schedule(static) reduction(+ : inter, uni) if (pa.size() >= kMinParallelPixels)
  for (long long i = 0; i < n; ++i) {
    inter += static_cast<std::size_t>(pa[static_cast<std::size_t>(i)] & pb[static_cast<std::size_t>(i)]);
    uni += static_cast<std::size_t>(pa[static_cast<std::size_t>(i)] | pb[static_cast<std::size_t>(i)]);
  }
  return {inter, uni};
}

std::vector<std::int64_t> squared_distance(const BinaryMask& sites) {
  const int h = sites.height();
  const int w = sites.width();
  std::vector<std::int64_t> grid(static_cast<std::size_t>(h) * w);
  const bool big = sites.size() >= kMinParallelPixels;
#pragma omp parallel if (big)
  {
    std::vector<std::int64_t> line(static_cast<std::size_t>(std::max(h, w)));
    detail::EnvelopeScratch scratch(std::max(h, w));
#pragma omp for schedule(static)
    for (int x = 0; x < w; ++x) detail::column_pass(sites, grid, x, line);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) detail::row_pass(grid, w, y, line, scratch);
  }
  return grid;
}

MatchCounts count_within(const BinaryMask& points, std::span<const std::int64_t> sq_dist,
                         double tolerance) {
  if (sq_dist.size() != points.size()) {
    throw DimensionMismatch("count_within: distance grid does not match mask");
  }
  const double limit = tolerance * tolerance;
  const auto bits = points.bits();
  const auto n = static_cast<long long>(bits.size());
  std::size_t matched = 0;
  std::size_t total = 0;
#pragma omp parallel for schedule(static) reduction(+ : matched, total) if (bits.size() >= kMinParallelPixels)
  for (long long i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (!bits[u]) continue;
    ++total;
    if (detail::within(sq_dist[u], limit)) ++matched;
  }
  return {matched, total};
}

BinaryMask morph(const BinaryMask& m, int radius) {
  if (radius == 0) return m;
  BinaryMask tmp(m.height(), m.width());
  BinaryMask out(m.height(), m.width());
  const bool big = m.size() >= kMinParallelPixels;
#pragma omp parallel if (big)
  {
    std::vector<int> prefix(static_cast<std::size_t>(std::max(m.height(), m.width())) + 1);
#pragma omp for schedule(static)
    for (int y = 0; y < m.height(); ++y) detail::morph_row(m, tmp, y, radius, prefix);
#pragma omp for schedule(static)
    for (int x = 0; x < m.width(); ++x) detail::morph_column(tmp, out, x, radius, prefix);
  }
  return out;
}

BinaryMask color_candidates(const RgbImage& image, const std::array<double, 3>& color,
                            double tolerance) {
  BinaryMask out(image.height(), image.width());
  const bool big = out.size() >= kMinParallelPixels;
#pragma omp parallel for schedule(static) if (big)
  for (int y = 0; y < image.height(); ++y) detail::color_row(image, out, y, color, tolerance);
  return out;
}

}  // namespace rvosh::kernels::parallel
