#pragma once

#include <filesystem>
#include <utility>

#include "rvosh/mask.hpp"
#include "rvosh/video.hpp"

namespace rvosh {

/// Any 8-bit PNG (palette, grey, with or without alpha) read as RGB.
RgbImage read_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const std::filesystem::path& path, const RgbImage& image);

/// Raw palette indices (or grey values) of a single-channel PNG.
LabelMap read_label_png(const std::filesystem::path& path);
/// Indexed-colour PNG with the usual VOC/DAVIS palette.
void write_label_png(const std::filesystem::path& path, const LabelMap& labels);

/// (height, width) from the PNG header only.
std::pair<int, int> read_png_size(const std::filesystem::path& path);

/// Indexed PNG with 0 = background, 1 = foreground.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);
/// Throws FormatError("non-binary annotation") on any value other than 0/1.
BinaryMask read_mask_png(const std::filesystem::path& path);

/// One PNG per frame named by the zero-padded 5-digit frame index.
void write_masks(const MaskTrack& track, const std::filesystem::path& dir);
/// Throws IoError("no frames") for an empty or missing directory.
MaskTrack read_masks(const std::filesystem::path& dir, const std::string& video_id);

std::string frame_file_name(int frame);

}  // namespace rvosh
