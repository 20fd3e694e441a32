#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rvosh/manifest.hpp"
#include "rvosh/random.hpp"
#include "rvosh/video.hpp"

namespace rvosh {

enum class ShapeKind { Disk, Rectangle };

/// (row, column) of an object's centre.
struct Point {
  int y = 0;
  int x = 0;
  friend bool operator==(Point, Point) = default;
};

struct SceneObject {
  ShapeKind shape = ShapeKind::Disk;
  Rgb color{255, 255, 255};
  /// Disk radius, or rectangle half-extents (half_height, half_width).
  int radius = 4;
  int half_height = 4;
  int half_width = 4;
  /// Centre per frame, one entry per video frame.
  std::vector<Point> centers;
  int first_visible = 0;
  int last_visible = 0;
};

struct SyntheticSceneSpec {
  std::string video_id = "scene";
  int frame_count = 1;
  int height = 32;
  int width = 32;
  Rgb background{16, 16, 16};
  /// Painted in order; later objects occlude earlier ones. Label = position + 1.
  std::vector<SceneObject> objects;
  Seed seed;
  /// Uniform per-channel pixel noise amplitude (0 disables).
  int pixel_noise = 0;

  /// Throws std::invalid_argument. Colours must differ pairwise and from the
  /// background by more than 2 * color_tolerance (max-channel distance).
  void validate(double color_tolerance = 16.0) const;
};

/// Centres for an object moving with constant velocity from `start` at frame
/// `from`. Frames outside the window repeat the nearest endpoint.
std::vector<Point> linear_trajectory(int frame_count, Point start, Point velocity, int from = 0);

struct GeneratedScene {
  VideoSequence video;
  std::vector<LabelMap> labels;
  /// Visible painted pixels per object label.
  std::map<int, MaskTrack> object_tracks;
};

GeneratedScene generate_scene(const SyntheticSceneSpec& spec);

struct SceneExpression {
  std::string id;
  std::string text;
  std::vector<int> object_ids;
};

struct SyntheticScene {
  SyntheticSceneSpec scene;
  std::vector<SceneExpression> expressions;
};

struct SyntheticDatasetSpec {
  std::string name = "synthetic";
  std::vector<SyntheticScene> scenes;
};

/// "static", "late-appearance", "two-object-conflict".
std::vector<std::string> preset_names();
/// Throws std::invalid_argument for an unknown name.
SyntheticDatasetSpec preset(std::string_view name);

/// JSON scene description (see README for the schema).
SyntheticDatasetSpec parse_synthetic_spec(std::string_view json_text);

/// Renders every scene and writes frames/, annotations/ and manifest.json
/// under `out_dir`. Returns the manifest that was written.
DatasetManifest write_synthetic_dataset(const SyntheticDatasetSpec& spec,
                                        const std::filesystem::path& out_dir);

}  // namespace rvosh
