#include "rvosh/synth.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "json.hpp"
#include "rvosh/error.hpp"
#include "rvosh/png_io.hpp"

namespace rvosh {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int color_distance(Rgb a, Rgb b) {
  int d = 0;
  for (std::size_t c = 0; c < 3; ++c) d = std::max(d, std::abs(int(a[c]) - int(b[c])));
  return d;
}

bool covers(const SceneObject& o, Point c, int y, int x) {
  const int dy = y - c.y;
  const int dx = x - c.x;
  if (o.shape == ShapeKind::Disk) return dy * dy + dx * dx <= o.radius * o.radius;
  return std::abs(dy) <= o.half_height && std::abs(dx) <= o.half_width;
}

Rgb parse_color(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw FormatError(where + ": color must be [r, g, b]");
  Rgb c{};
  for (std::size_t i = 0; i < 3; ++i) {
    const int v = j[i].get<int>();
    if (v < 0 || v > 255) throw FormatError(where + ": color channel out of range");
    c[i] = static_cast<std::uint8_t>(v);
  }
  return c;
}

Point parse_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw FormatError(where + ": point must be [y, x]");
  return {j[0].get<int>(), j[1].get<int>()};
}

SceneObject disk(Rgb color, int radius, std::vector<Point> centers, int first, int last) {
  SceneObject o;
  o.shape = ShapeKind::Disk;
  o.color = color;
  o.radius = radius;
  o.centers = std::move(centers);
  o.first_visible = first;
  o.last_visible = last;
  return o;
}

SceneObject rectangle(Rgb color, int half_height, int half_width, std::vector<Point> centers,
                      int first, int last) {
  SceneObject o;
  o.shape = ShapeKind::Rectangle;
  o.color = color;
  o.half_height = half_height;
  o.half_width = half_width;
  o.centers = std::move(centers);
  o.first_visible = first;
  o.last_visible = last;
  return o;
}

}  // namespace

void SyntheticSceneSpec::validate(double color_tolerance) const {
  if (video_id.empty()) throw std::invalid_argument("scene needs a video id");
  if (frame_count < 1 || height < 1 || width < 1) {
    throw std::invalid_argument("scene '" + video_id + "': frame count and size must be >= 1");
  }
  if (objects.size() > 255) throw std::invalid_argument("scene supports at most 255 objects");
  if (pixel_noise < 0 || 2.0 * pixel_noise > color_tolerance) {
    throw std::invalid_argument("scene '" + video_id + "': pixel noise must be in [0, tolerance/2]");
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    const std::string where = "scene '" + video_id + "' object " + std::to_string(i + 1);
    if (static_cast<int>(o.centers.size()) != frame_count) {
      throw std::invalid_argument(where + ": needs one centre per frame");
    }
    if (o.first_visible < 0 || o.last_visible >= frame_count || o.first_visible > o.last_visible) {
      throw std::invalid_argument(where + ": invalid visibility window");
    }
    if (o.shape == ShapeKind::Disk ? o.radius < 0 : (o.half_height < 0 || o.half_width < 0)) {
      throw std::invalid_argument(where + ": negative size");
    }
    for (int t = o.first_visible; t <= o.last_visible; ++t) {
      const auto c = o.centers[static_cast<std::size_t>(t)];
      if (c.y < 0 || c.y >= height || c.x < 0 || c.x >= width) {
        throw std::invalid_argument(where + ": centre leaves the image at frame " +
                                    std::to_string(t));
      }
    }
    if (color_distance(o.color, background) <= 2 * color_tolerance) {
      throw std::invalid_argument(where + ": colour too close to the background");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (color_distance(o.color, objects[j].color) <= 2 * color_tolerance) {
        throw std::invalid_argument(where + ": colour too close to object " + std::to_string(j + 1));
      }
    }
  }
}

std::vector<Point> linear_trajectory(int frame_count, Point start, Point velocity, int from) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(std::max(frame_count, 0)));
  for (int t = 0; t < frame_count; ++t) {
    const int s = std::max(t - from, 0);
    out.push_back({start.y + velocity.y * s, start.x + velocity.x * s});
  }
  return out;
}

GeneratedScene generate_scene(const SyntheticSceneSpec& spec) {
  spec.validate();
  const auto noise_rng = CounterRng(derive_seed(spec.seed, spec.video_id, "", "pixel-noise"));
  std::vector<FrameRef> frames;
  std::vector<LabelMap> labels;
  for (int t = 0; t < spec.frame_count; ++t) {
    RgbImage img(spec.height, spec.width, spec.background);
    LabelMap lm(spec.height, spec.width);
    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
      const auto& o = spec.objects[i];
      if (t < o.first_visible || t > o.last_visible) continue;
      const Point c = o.centers[static_cast<std::size_t>(t)];
      for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
          if (!covers(o, c, y, x)) continue;
          img.set(y, x, o.color);
          lm.set(y, x, static_cast<std::uint8_t>(i + 1));
        }
      }
    }
    if (spec.pixel_noise > 0) {
      const auto span = static_cast<std::uint64_t>(2 * spec.pixel_noise + 1);
      const auto base = static_cast<std::uint64_t>(t) * spec.height * spec.width * 3;
      for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
          Rgb p = img.at(y, x);
          for (std::size_t ch = 0; ch < 3; ++ch) {
            const auto k = base + (static_cast<std::uint64_t>(y) * spec.width + x) * 3 + ch;
            const int delta = static_cast<int>(noise_rng.at(k) % span) - spec.pixel_noise;
            p[ch] = static_cast<std::uint8_t>(std::clamp(int(p[ch]) + delta, 0, 255));
          }
          img.set(y, x, p);
        }
      }
    }
    frames.push_back({"", std::make_shared<const RgbImage>(std::move(img))});
    labels.push_back(std::move(lm));
  }

  GeneratedScene scene{VideoSequence(spec.video_id, spec.height, spec.width, std::move(frames)),
                       std::move(labels),
                       {}};
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const int label[] = {static_cast<int>(i + 1)};
    MaskTrack track(spec.video_id);
    for (int t = 0; t < spec.frame_count; ++t) {
      track.set(t, scene.labels[static_cast<std::size_t>(t)].select(label));
    }
    scene.object_tracks.emplace(label[0], std::move(track));
  }
  return scene;
}

std::vector<std::string> preset_names() { return {"static", "late-appearance", "two-object-conflict"}; }

SyntheticDatasetSpec preset(std::string_view name) {
  const Rgb red{220, 40, 40};
  const Rgb green{40, 200, 60};
  const Rgb blue{40, 80, 220};
  SyntheticDatasetSpec ds;
  ds.name = std::string(name);
  SyntheticScene s;
  auto& sc = s.scene;
  sc.height = 48;
  sc.width = 64;
  sc.background = {16, 16, 16};

  if (name == "static") {
    sc.video_id = "static";
    sc.frame_count = 10;
    sc.objects.push_back(disk(red, 7, linear_trajectory(10, {24, 18}, {0, 0}), 0, 9));
    sc.objects.push_back(rectangle(green, 6, 8, linear_trajectory(10, {22, 46}, {0, 0}), 0, 9));
    s.expressions = {{"0", "the red ball", {1}}, {"1", "the green box", {2}}};
  } else if (name == "late-appearance") {
    // The referred ball only enters in the second half; a box sits there throughout.
    sc.video_id = "late";
    sc.frame_count = 21;
    sc.objects.push_back(rectangle(blue, 5, 7, linear_trajectory(21, {12, 50}, {0, 0}), 0, 20));
    sc.objects.push_back(disk(red, 5, linear_trajectory(21, {34, 8}, {0, 2}, 10), 10, 20));
    s.expressions = {{"0", "the red ball that rolls in later", {2}}};
  } else if (name == "two-object-conflict") {
    // Target and distractor both visible from the first frame, moving apart.
    sc.video_id = "conflict";
    sc.frame_count = 21;
    sc.objects.push_back(disk(red, 6, linear_trajectory(21, {14, 10}, {0, 2}), 0, 20));
    sc.objects.push_back(rectangle(green, 6, 6, linear_trajectory(21, {34, 54}, {0, -2}), 0, 20));
    s.expressions = {{"0", "the red ball moving right", {1}}};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  ds.scenes.push_back(std::move(s));
  return ds;
}

SyntheticDatasetSpec parse_synthetic_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("scene spec: invalid JSON: ") + e.what());
  }
  try {
    SyntheticDatasetSpec ds;
    ds.name = doc.value("dataset", std::string("synthetic"));
    for (const auto& js : doc.at("scenes")) {
      SyntheticScene s;
      auto& sc = s.scene;
      sc.video_id = js.at("id").get<std::string>();
      const std::string where = "scene '" + sc.video_id + "'";
      sc.frame_count = js.at("frames").get<int>();
      sc.height = js.at("height").get<int>();
      sc.width = js.at("width").get<int>();
      if (js.contains("background")) sc.background = parse_color(js["background"], where);
      sc.seed = Seed{js.value("seed", std::uint64_t{0})};
      sc.pixel_noise = js.value("pixel_noise", 0);
      for (const auto& jo : js.at("objects")) {
        SceneObject o;
        const auto shape = jo.at("shape").get<std::string>();
        if (shape == "disk") {
          o.shape = ShapeKind::Disk;
          o.radius = jo.at("radius").get<int>();
        } else if (shape == "rectangle") {
          o.shape = ShapeKind::Rectangle;
          o.half_height = jo.at("half_height").get<int>();
          o.half_width = jo.at("half_width").get<int>();
        } else {
          throw FormatError(where + ": unknown shape '" + shape + "'");
        }
        o.color = parse_color(jo.at("color"), where);
        const auto vis = jo.value("visible", std::vector<int>{0, sc.frame_count - 1});
        if (vis.size() != 2) throw FormatError(where + ": 'visible' must be [first, last]");
        o.first_visible = vis[0];
        o.last_visible = vis[1];
        if (jo.contains("centers")) {
          for (const auto& p : jo["centers"]) o.centers.push_back(parse_point(p, where));
        } else {
          const Point start = parse_point(jo.at("start"), where);
          const Point vel = jo.contains("velocity") ? parse_point(jo["velocity"], where) : Point{};
          o.centers = linear_trajectory(sc.frame_count, start, vel, o.first_visible);
        }
        sc.objects.push_back(std::move(o));
      }
      for (const auto& je : js.at("expressions")) {
        s.expressions.push_back({je.at("id").get<std::string>(), je.at("text").get<std::string>(),
                                 je.at("object_ids").get<std::vector<int>>()});
      }
      ds.scenes.push_back(std::move(s));
    }
    return ds;
  } catch (const json::exception& e) {
    throw FormatError(std::string("scene spec: ") + e.what());
  }
}

DatasetManifest write_synthetic_dataset(const SyntheticDatasetSpec& spec, const fs::path& out_dir) {
  DatasetManifest manifest;
  manifest.name = spec.name;
  for (const auto& s : spec.scenes) {
    const GeneratedScene scene = generate_scene(s.scene);
    const auto& vid = s.scene.video_id;
    VideoRecord record{vid, s.scene.height, s.scene.width, {}};
    std::vector<std::string> annotations;
    for (int t = 0; t < scene.video.frame_count(); ++t) {
      const std::string frame_rel = "frames/" + vid + "/" + frame_file_name(t);
      const std::string anno_rel = "annotations/" + vid + "/" + frame_file_name(t);
      write_rgb_png(out_dir / frame_rel, scene.video.pixels(t));
      write_label_png(out_dir / anno_rel, scene.labels[static_cast<std::size_t>(t)]);
      record.frames.push_back(frame_rel);
      annotations.push_back(anno_rel);
    }
    manifest.videos.push_back(std::move(record));
    for (const auto& e : s.expressions) {
      auto ids = e.object_ids;
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      manifest.expressions.push_back({e.id, vid, e.text, std::move(ids), annotations});
    }
  }
  save_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace rvosh
