#include "rvosh/mask.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rvosh/error.hpp"

namespace rvosh {
namespace {

void check_dims(int height, int width) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("mask dimensions must be >= 1, got " + std::to_string(height) +
                                "x" + std::to_string(width));
  }
}

std::size_t cell_count(int height, int width) {
  return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
}

}  // namespace

BinaryMask::BinaryMask(int height, int width) : height_(height), width_(width) {
  check_dims(height, width);
  bits_.assign(cell_count(height, width), 0);
}

BinaryMask::BinaryMask(int height, int width, std::vector<std::uint8_t> bits)
    : height_(height), width_(width), bits_(std::move(bits)) {
  check_dims(height, width);
  if (bits_.size() != cell_count(height, width)) {
    throw std::invalid_argument("mask bit count does not match height*width");
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t mask_area(const BinaryMask& m) {
  const auto bits = m.bits();
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

bool mask_equal(const BinaryMask& a, const BinaryMask& b) { return a == b; }

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw DimensionMismatch("mask_union: shape mismatch");
  BinaryMask out = a;
  auto dst = out.bits();
  const auto src = b.bits();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
  return out;
}

RgbImage::RgbImage(int height, int width, Rgb fill) : height_(height), width_(width) {
  check_dims(height, width);
  data_.resize(3 * cell_count(height, width));
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill[0];
    data_[i + 1] = fill[1];
    data_[i + 2] = fill[2];
  }
}

RgbImage::RgbImage(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width);
  if (data_.size() != 3 * cell_count(height, width)) {
    throw std::invalid_argument("RGB buffer size does not match 3*height*width");
  }
}

LabelMap::LabelMap(int height, int width) : height_(height), width_(width) {
  check_dims(height, width);
  labels_.assign(cell_count(height, width), 0);
}

LabelMap::LabelMap(int height, int width, std::vector<std::uint8_t> labels)
    : height_(height), width_(width), labels_(std::move(labels)) {
  check_dims(height, width);
  if (labels_.size() != cell_count(height, width)) {
    throw std::invalid_argument("label buffer size does not match height*width");
  }
}

BinaryMask LabelMap::select(std::span<const int> labels) const {
  std::array<std::uint8_t, 256> wanted{};
  for (int l : labels) {
    if (l >= 0 && l < 256) wanted[static_cast<std::size_t>(l)] = 1;
  }
  std::vector<std::uint8_t> bits(labels_.size());
  std::transform(labels_.begin(), labels_.end(), bits.begin(),
                 [&](std::uint8_t l) { return wanted[l]; });
  return BinaryMask(height_, width_, std::move(bits));
}

}  // namespace rvosh
