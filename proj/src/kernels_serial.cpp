#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "kernels_detail.hpp"
#include "rvosh/error.hpp"
#include "rvosh/kernels.hpp"

namespace rvosh::kernels {

BinaryMask grow_components(const BinaryMask& candidates, const BinaryMask& seeds) {
  if (!candidates.same_shape(seeds)) throw DimensionMismatch("grow_components: shape mismatch");
  const int h = candidates.height();
  const int w = candidates.width();
  BinaryMask out(h, w);
  const auto cand = candidates.bits();
  const auto seed = seeds.bits();
  auto res = out.bits();
  std::vector<int> stack;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (cand[i] && seed[i] && !res[i]) {
      res[i] = 1;
      stack.push_back(static_cast<int>(i));
    }
  }
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const int y = i / w;
    const int x = i % w;
    const int ny[4] = {y - 1, y + 1, y, y};
    const int nx[4] = {x, x, x - 1, x + 1};
    for (int k = 0; k < 4; ++k) {
      if (ny[k] < 0 || ny[k] >= h || nx[k] < 0 || nx[k] >= w) continue;
      const auto j = static_cast<std::size_t>(ny[k]) * w + nx[k];
      if (cand[j] && !res[j]) {
        res[j] = 1;
        stack.push_back(static_cast<int>(j));
      }
    }
  }
  return out;
}

namespace serial {

BinaryMask boundary(const BinaryMask& m) {
  BinaryMask out(m.height(), m.width());
  for (int y = 0; y < m.height(); ++y) detail::boundary_row(m, out, y);
  return out;
}

OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw DimensionMismatch("overlap: shape mismatch");
  const auto pa = a.bits();
  const auto pb = b.bits();
  OverlapCounts c;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    c.intersection += static_cast<std::size_t>(pa[i] & pb[i]);
    c.united += static_cast<std::size_t>(pa[i] | pb[i]);
  }
  return c;
}

std::vector<std::int64_t> squared_distance(const BinaryMask& sites) {
  const int h = sites.height();
  const int w = sites.width();
  std::vector<std::int64_t> grid(static_cast<std::size_t>(h) * w);
  std::vector<std::int64_t> line(static_cast<std::size_t>(std::max(h, w)));
  detail::EnvelopeScratch scratch(std::max(h, w));
  for (int x = 0; x < w; ++x) detail::column_pass(sites, grid, x, line);
  for (int y = 0; y < h; ++y) detail::row_pass(grid, w, y, line, scratch);
  return grid;
}

MatchCounts count_within(const BinaryMask& points, std::span<const std::int64_t> sq_dist,
                         double tolerance) {
  if (sq_dist.size() != points.size()) {
    throw DimensionMismatch("count_within: distance grid does not match mask");
  }
  const double limit = tolerance * tolerance;
  const auto bits = points.bits();
  MatchCounts c;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    ++c.total;
    if (detail::within(sq_dist[i], limit)) ++c.matched;
  }
  return c;
}

BinaryMask morph(const BinaryMask& m, int radius) {
  if (radius == 0) return m;
  BinaryMask tmp(m.height(), m.width());
  BinaryMask out(m.height(), m.width());
  std::vector<int> prefix(static_cast<std::size_t>(std::max(m.height(), m.width())) + 1);
  for (int y = 0; y < m.height(); ++y) detail::morph_row(m, tmp, y, radius, prefix);
  for (int x = 0; x < m.width(); ++x) detail::morph_column(tmp, out, x, radius, prefix);
  return out;
}

BinaryMask color_candidates(const RgbImage& image, const std::array<double, 3>& color,
                            double tolerance) {
  BinaryMask out(image.height(), image.width());
  for (int y = 0; y < image.height(); ++y) detail::color_row(image, out, y, color, tolerance);
  return out;
}

}  // namespace serial

BinaryMask boundary(const BinaryMask& m, Execution exec) {
  return exec == Execution::Serial ? serial::boundary(m) : parallel::boundary(m);
}
OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b, Execution exec) {
  return exec == Execution::Serial ? serial::overlap(a, b) : parallel::overlap(a, b);
}
std::vector<std::int64_t> squared_distance(const BinaryMask& sites, Execution exec) {
  return exec == Execution::Serial ? serial::squared_distance(sites)
                                   : parallel::squared_distance(sites);
}
MatchCounts count_within(const BinaryMask& points, std::span<const std::int64_t> sq_dist,
                         double tolerance, Execution exec) {
  return exec == Execution::Serial ? serial::count_within(points, sq_dist, tolerance)
                                   : parallel::count_within(points, sq_dist, tolerance);
}
BinaryMask morph(const BinaryMask& m, int radius, Execution exec) {
  return exec == Execution::Serial ? serial::morph(m, radius) : parallel::morph(m, radius);
}
BinaryMask color_candidates(const RgbImage& image, const std::array<double, 3>& color,
                            double tolerance, Execution exec) {
  return exec == Execution::Serial ? serial::color_candidates(image, color, tolerance)
                                   : parallel::color_candidates(image, color, tolerance);
}

}  // namespace rvosh::kernels
