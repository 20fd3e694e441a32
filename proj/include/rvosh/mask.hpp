#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rvosh {

/// Row-major binary mask. Bits are stored one per byte (0 or 1) so they can be
/// exposed as spans and processed in parallel without bit twiddling.
class BinaryMask {
 public:
  /// All-false mask. Throws std::invalid_argument unless height, width >= 1.
  BinaryMask(int height, int width);
  /// Takes ownership of `bits`; any non-zero byte is normalized to 1.
  BinaryMask(int height, int width, std::vector<std::uint8_t> bits);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(int y, int x) const { return bits_[index(y, x)] != 0; }
  void set(int y, int x, bool value = true) { bits_[index(y, x)] = value ? 1 : 0; }
  bool contains(int y, int x) const noexcept {
    return y >= 0 && y < height_ && x >= 0 && x < width_;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }

  bool same_shape(const BinaryMask& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int y, int x) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int height_;
  int width_;
  std::vector<std::uint8_t> bits_;
};

std::size_t mask_area(const BinaryMask& m);
bool mask_equal(const BinaryMask& a, const BinaryMask& b);
/// Throws DimensionMismatch on shape disagreement.
BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);

using Rgb = std::array<std::uint8_t, 3>;

/// Interleaved 8-bit RGB raster.
class RgbImage {
 public:
  RgbImage(int height, int width, Rgb fill = {0, 0, 0});
  RgbImage(int height, int width, std::vector<std::uint8_t> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

  Rgb at(int y, int x) const {
    const auto* p = &data_[offset(y, x)];
    return {p[0], p[1], p[2]};
  }
  void set(int y, int x, Rgb c) {
    auto* p = &data_[offset(y, x)];
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t offset(int y, int x) const noexcept {
    return 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x));
  }

  int height_;
  int width_;
  std::vector<std::uint8_t> data_;
};

/// Single-channel indexed raster: 0 is background, other values are object labels.
class LabelMap {
 public:
  LabelMap(int height, int width);
  LabelMap(int height, int width, std::vector<std::uint8_t> labels);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::uint8_t at(int y, int x) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int y, int x, std::uint8_t label) {
    labels_[static_cast<std::size_t>(y) * width_ + x] = label;
  }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }

  /// Pixels whose label is any of `labels`.
  BinaryMask select(std::span<const int> labels) const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int height_;
  int width_;
  std::vector<std::uint8_t> labels_;
};

}  // namespace rvosh
