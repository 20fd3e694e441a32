#include "rvosh/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <fmt/format.h>
#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rvosh/error.hpp"

namespace rvosh {
namespace {

namespace fs = std::filesystem;

enum class ReadMode { Rgb, Index, HeaderOnly };

struct RawImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;
};

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

void on_png_warning(png_structp, png_const_charp) {}

// libpng reports errors through longjmp. Everything between setjmp and the
// last libpng call is plain C state, so no destructor is skipped; the caller
// owns `out` and `error`.
bool read_png_raw(std::FILE* file, ReadMode mode, RawImage& out, char* error, std::size_t cap) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, on_png_warning);
  if (!png) {
    std::snprintf(error, cap, "cannot allocate PNG reader");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::snprintf(error, cap, "cannot allocate PNG info");
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::snprintf(error, cap, "corrupt or unsupported PNG");
    return false;
  }
  png_init_io(png, file);
  png_read_info(png, info);
  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  out.height = height;
  out.width = width;
  if (mode == ReadMode::HeaderOnly) {
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
  }

  std::size_t channels = 0;
  if (mode == ReadMode::Index) {
    if ((color != PNG_COLOR_TYPE_PALETTE && color != PNG_COLOR_TYPE_GRAY) || depth > 8) {
      png_destroy_read_struct(&png, &info, nullptr);
      std::snprintf(error, cap, "expected a single-channel 8-bit (indexed or grey) PNG");
      return false;
    }
    if (depth < 8) png_set_packing(png);
    channels = 1;
  } else {
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    channels = 3;
  }
  const int passes = png_set_interlace_handling(png);
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != channels * static_cast<std::size_t>(width)) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::snprintf(error, cap, "unexpected PNG row layout");
    return false;
  }
  out.data.assign(channels * static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  for (int pass = 0; pass < passes; ++pass) {
    for (int y = 0; y < height; ++y) {
      png_read_row(png, out.data.data() + channels * static_cast<std::size_t>(width) * y, nullptr);
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

RawImage read_png(const fs::path& path, ReadMode mode) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open '" + path.string() + "'");
  RawImage raw;
  char error[256] = {0};
  if (!read_png_raw(file.get(), mode, raw, error, sizeof error)) {
    throw FormatError("'" + path.string() + "': " + error);
  }
  return raw;
}

bool write_png_raw(std::FILE* file, int height, int width, int color_type,
                   const png_color* palette, int palette_size, const std::uint8_t* data,
                   std::size_t row_bytes) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, on_png_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (palette) png_set_PLTE(png, info, palette, palette_size);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) png_write_row(png, data + row_bytes * static_cast<std::size_t>(y));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void write_png(const fs::path& path, int height, int width, int color_type,
               const std::vector<png_color>& palette, const std::uint8_t* data,
               std::size_t row_bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot create '" + path.string() + "'");
  const bool ok = write_png_raw(file.get(), height, width, color_type,
                                palette.empty() ? nullptr : palette.data(),
                                static_cast<int>(palette.size()), data, row_bytes);
  if (!ok || std::fflush(file.get()) != 0) throw IoError("failed writing '" + path.string() + "'");
}

/// Pascal VOC / DAVIS colour map: bits of the index spread over RGB.
std::vector<png_color> voc_palette(int entries) {
  std::vector<png_color> out(static_cast<std::size_t>(entries));
  for (int i = 0; i < entries; ++i) {
    int c = i;
    int r = 0, g = 0, b = 0;
    for (int j = 7; j >= 0 && c; --j, c >>= 3) {
      r |= ((c >> 0) & 1) << j;
      g |= ((c >> 1) & 1) << j;
      b |= ((c >> 2) & 1) << j;
    }
    out[static_cast<std::size_t>(i)] = {static_cast<png_byte>(r), static_cast<png_byte>(g),
                                        static_cast<png_byte>(b)};
  }
  return out;
}

}  // namespace

RgbImage read_rgb_png(const fs::path& path) {
  auto raw = read_png(path, ReadMode::Rgb);
  return RgbImage(raw.height, raw.width, std::move(raw.data));
}

void write_rgb_png(const fs::path& path, const RgbImage& image) {
  write_png(path, image.height(), image.width(), PNG_COLOR_TYPE_RGB, {}, image.data().data(),
            3 * static_cast<std::size_t>(image.width()));
}

LabelMap read_label_png(const fs::path& path) {
  auto raw = read_png(path, ReadMode::Index);
  return LabelMap(raw.height, raw.width, std::move(raw.data));
}

void write_label_png(const fs::path& path, const LabelMap& labels) {
  const auto l = labels.labels();
  const int max_label = l.empty() ? 0 : *std::max_element(l.begin(), l.end());
  write_png(path, labels.height(), labels.width(), PNG_COLOR_TYPE_PALETTE,
            voc_palette(std::max(2, max_label + 1)), l.data(),
            static_cast<std::size_t>(labels.width()));
}

std::pair<int, int> read_png_size(const fs::path& path) {
  auto raw = read_png(path, ReadMode::HeaderOnly);
  return {raw.height, raw.width};
}

void write_mask_png(const fs::path& path, const BinaryMask& mask) {
  write_png(path, mask.height(), mask.width(), PNG_COLOR_TYPE_PALETTE, voc_palette(2),
            mask.bits().data(), static_cast<std::size_t>(mask.width()));
}

BinaryMask read_mask_png(const fs::path& path) {
  auto raw = read_png(path, ReadMode::Index);
  for (auto v : raw.data) {
    if (v > 1) {
      throw FormatError("'" + path.string() + "': non-binary annotation (pixel value " +
                        std::to_string(v) + ")");
    }
  }
  return BinaryMask(raw.height, raw.width, std::move(raw.data));
}

std::string frame_file_name(int frame) { return fmt::format("{:05d}.png", frame); }

void write_masks(const MaskTrack& track, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [frame, mask] : track.entries()) write_mask_png(dir / frame_file_name(frame), mask);
}

MaskTrack read_masks(const fs::path& dir, const std::string& video_id) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("'" + dir.string() + "': no frames");
  std::map<int, fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const auto stem = entry.path().stem().string();
    if (stem.size() != 5 || !std::all_of(stem.begin(), stem.end(), ::isdigit)) continue;
    files.emplace(std::stoi(stem), entry.path());
  }
  if (files.empty()) throw IoError("'" + dir.string() + "': no frames");
  MaskTrack track(video_id);
  for (const auto& [frame, path] : files) track.set(frame, read_mask_png(path));
  return track;
}

}  // namespace rvosh
