#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rvosh/manifest.hpp"

namespace rvosh {

struct MevisImportOptions {
  /// Directory holding <video>/<frame><ext> images. Defaults to
  /// <annotations_root>/../JPEGImages when empty.
  std::filesystem::path frames_root;
  std::string frame_extension = ".png";
  /// Paths in the manifest are written relative to this directory (absolute if empty).
  std::filesystem::path manifest_dir;
  std::string dataset_name = "mevis";
};

struct MevisImportResult {
  DatasetManifest manifest;
  std::vector<std::string> warnings;
};

/// Converts a MeViS-style meta_expressions.json
///   {"videos": {"<vid>": {"frames": [...], "expressions": {"<eid>": {"exp": ..., "anno_id": [...], "obj_id": [...]}}}}}
/// plus per-frame label images <annotations_root>/<vid>/<frame>.png (pixel
/// value = annotation id) into a canonical manifest. Video, frame and
/// expression order follow the source file.
MevisImportResult import_mevis_meta(const std::filesystem::path& meta_path,
                                    const std::filesystem::path& annotations_root,
                                    const MevisImportOptions& options = {});

}  // namespace rvosh
