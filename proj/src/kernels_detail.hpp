#pragma once

// Per-row / per-column bodies shared by the serial and OpenMP kernels. Each
// function touches only its own row or column of the output, so the parallel
// versions can distribute them without synchronization.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rvosh/kernels.hpp"

namespace rvosh::kernels::detail {

inline bool within(std::int64_t sq_dist, double limit) {
  return sq_dist != kNoSite && static_cast<double>(sq_dist) <= limit;
}

inline void boundary_row(const BinaryMask& m, BinaryMask& out, int y) {
  const int h = m.height();
  const int w = m.width();
  for (int x = 0; x < w; ++x) {
    if (!m.at(y, x)) continue;
    const bool edge = y == 0 || y == h - 1 || x == 0 || x == w - 1 || !m.at(y - 1, x) ||
                      !m.at(y + 1, x) || !m.at(y, x - 1) || !m.at(y, x + 1);
    if (edge) out.set(y, x);
  }
}

/// 1-D distance to the nearest site along column x, squared, into grid.
inline void column_pass(const BinaryMask& sites, std::vector<std::int64_t>& grid, int x,
                        std::vector<std::int64_t>& line) {
  const int h = sites.height();
  const int w = sites.width();
  constexpr std::int64_t far = std::numeric_limits<std::int32_t>::max();
  std::int64_t last = -far;
  for (int y = 0; y < h; ++y) {
    if (sites.at(y, x)) last = y;
    line[static_cast<std::size_t>(y)] = y - last;
  }
  last = 2 * far;
  for (int y = h - 1; y >= 0; --y) {
    if (sites.at(y, x)) last = y;
    auto& d = line[static_cast<std::size_t>(y)];
    d = std::min(d, last - y);
  }
  for (int y = 0; y < h; ++y) {
    const auto d = line[static_cast<std::size_t>(y)];
    grid[static_cast<std::size_t>(y) * w + x] = d >= far ? kNoSite : d * d;
  }
}

struct EnvelopeScratch {
  explicit EnvelopeScratch(int n)
      : vertex(static_cast<std::size_t>(n)), bound(static_cast<std::size_t>(n) + 1) {}
  std::vector<int> vertex;
  std::vector<double> bound;
};

/// Lower envelope of parabolas (x - v)^2 + f(v) along row y (Felzenszwalb &
/// Huttenlocher). Only finite f values become parabolas; results are exact
/// integers because the winning parabola is evaluated in integer arithmetic.
inline void row_pass(std::vector<std::int64_t>& grid, int w, int y,
                     std::vector<std::int64_t>& line, EnvelopeScratch& s) {
  std::int64_t* row = grid.data() + static_cast<std::size_t>(y) * w;
  for (int x = 0; x < w; ++x) line[static_cast<std::size_t>(x)] = row[x];

  auto intersect = [&](int q, int v) {
    const double fq = static_cast<double>(line[q]) + static_cast<double>(q) * q;
    const double fv = static_cast<double>(line[v]) + static_cast<double>(v) * v;
    return (fq - fv) / (2.0 * (q - v));
  };

  int k = -1;
  for (int q = 0; q < w; ++q) {
    if (line[static_cast<std::size_t>(q)] == kNoSite) continue;
    if (k < 0) {
      k = 0;
      s.vertex[0] = q;
      s.bound[0] = -std::numeric_limits<double>::infinity();
      s.bound[1] = std::numeric_limits<double>::infinity();
      continue;
    }
    double cut = intersect(q, s.vertex[static_cast<std::size_t>(k)]);
    while (cut <= s.bound[static_cast<std::size_t>(k)]) {
      --k;
      cut = intersect(q, s.vertex[static_cast<std::size_t>(k)]);
    }
    ++k;
    s.vertex[static_cast<std::size_t>(k)] = q;
    s.bound[static_cast<std::size_t>(k)] = cut;
    s.bound[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  if (k < 0) return;  // no sites in this row's column projections: stays kNoSite

  k = 0;
  for (int x = 0; x < w; ++x) {
    while (s.bound[static_cast<std::size_t>(k) + 1] < x) ++k;
    const std::int64_t v = s.vertex[static_cast<std::size_t>(k)];
    row[x] = (x - v) * (x - v) + line[static_cast<std::size_t>(v)];
  }
}

/// Sliding-window any/all over a 1-D run. Dilation when radius > 0,
/// erosion when radius < 0 (windows reaching off-image never survive erosion).
template <typename Get, typename Put>
inline void morph_line(int n, int radius, std::vector<int>& prefix, Get get, Put put) {
  const int r = radius < 0 ? -radius : radius;
  prefix[0] = 0;
  for (int i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[i] + (get(i) ? 1 : 0);
  for (int i = 0; i < n; ++i) {
    const int lo = i - r;
    const int hi = i + r;
    const int clo = lo < 0 ? 0 : lo;
    const int chi = hi >= n ? n - 1 : hi;
    const int count = prefix[static_cast<std::size_t>(chi) + 1] - prefix[static_cast<std::size_t>(clo)];
    if (radius > 0) {
      put(i, count > 0);
    } else {
      put(i, lo >= 0 && hi < n && count == 2 * r + 1);
    }
  }
}

inline void morph_row(const BinaryMask& in, BinaryMask& out, int y, int radius,
                      std::vector<int>& prefix) {
  morph_line(
      in.width(), radius, prefix, [&](int x) { return in.at(y, x); },
      [&](int x, bool v) { out.set(y, x, v); });
}

inline void morph_column(const BinaryMask& in, BinaryMask& out, int x, int radius,
                         std::vector<int>& prefix) {
  morph_line(
      in.height(), radius, prefix, [&](int y) { return in.at(y, x); },
      [&](int y, bool v) { out.set(y, x, v); });
}

inline void color_row(const RgbImage& image, BinaryMask& out, int y,
                      const std::array<double, 3>& color, double tolerance) {
  for (int x = 0; x < image.width(); ++x) {
    const Rgb p = image.at(y, x);
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, std::abs(static_cast<double>(p[static_cast<std::size_t>(c)]) -
                                       color[static_cast<std::size_t>(c)]));
    }
    if (worst <= tolerance) out.set(y, x);
  }
}

}  // namespace rvosh::kernels::detail
