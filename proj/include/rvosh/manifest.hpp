#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rvosh/mask.hpp"
#include "rvosh/video.hpp"

namespace rvosh {

inline constexpr std::string_view kManifestSchema = "rvosh-manifest/1";

struct VideoRecord {
  std::string id;
  int height = 0;
  int width = 0;
  /// Frame image paths, absolute or relative to the manifest directory.
  std::vector<std::string> frames;
};

struct ExpressionRecord {
  std::string id;
  std::string video_id;
  std::string text;
  /// Labels in the annotation images that together form the target.
  std::vector<int> object_ids;
  /// One indexed label image per frame; empty when there is no ground truth.
  std::vector<std::string> annotations;
};

/// On-disk dataset description (JSON, schema "rvosh-manifest/1").
struct DatasetManifest {
  std::string name;
  std::vector<VideoRecord> videos;
  std::vector<ExpressionRecord> expressions;

  /// Canonical serialization: fixed key order, two-space indent, trailing newline.
  std::string to_json() const;
  /// Throws FormatError with `context` (usually the path) in the message.
  static DatasetManifest from_json(std::string_view text, std::string_view context = "manifest");
  /// Structural checks that need no file access.
  void validate(std::string_view context = "manifest") const;
};

/// A manifest with its frames indexed and ground truth decoded.
struct Dataset {
  DatasetManifest manifest;
  std::filesystem::path root;
  std::vector<VideoSequence> videos;
  std::vector<ExpressionTask> expressions;
  /// Raw label maps per expression (parallel to `expressions`), used to
  /// build toy-predictor oracles. Empty vector when there is no ground truth.
  std::vector<std::vector<LabelMap>> annotations;

  const VideoSequence& video(const std::string& id) const;
};

/// Loads and validates: checks every frame exists with the declared size and
/// binarizes each expression's ground truth as the union of its object ids.
Dataset load_manifest(const std::filesystem::path& path);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Reads every frame of every video into memory (needed by the toy propagator).
void load_pixels(Dataset& dataset);

std::filesystem::path resolve_path(const std::filesystem::path& root, const std::string& p);

}  // namespace rvosh
