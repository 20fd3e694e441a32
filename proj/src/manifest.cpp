#include "rvosh/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rvosh/error.hpp"
#include "rvosh/png_io.hpp"

namespace rvosh {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T field(const json& obj, const char* key, std::string_view context) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw FormatError(std::string(context) + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string(context) + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

std::string DatasetManifest::to_json() const {
  ordered_json doc;
  doc["schema"] = kManifestSchema;
  doc["dataset"] = name;
  doc["videos"] = ordered_json::array();
  for (const auto& v : videos) {
    ordered_json jv;
    jv["id"] = v.id;
    jv["height"] = v.height;
    jv["width"] = v.width;
    jv["frames"] = v.frames;
    doc["videos"].push_back(std::move(jv));
  }
  doc["expressions"] = ordered_json::array();
  for (const auto& e : expressions) {
    ordered_json je;
    je["id"] = e.id;
    je["video_id"] = e.video_id;
    je["text"] = e.text;
    je["object_ids"] = e.object_ids;
    je["annotations"] = e.annotations;
    doc["expressions"].push_back(std::move(je));
  }
  return doc.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json(std::string_view text, std::string_view context) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(context) + ": invalid JSON: " + e.what());
  }
  const auto schema = field<std::string>(doc, "schema", context);
  if (schema != kManifestSchema) {
    throw FormatError(std::string(context) + ": unsupported schema '" + schema + "', expected '" +
                      std::string(kManifestSchema) + "'");
  }
  DatasetManifest m;
  m.name = field<std::string>(doc, "dataset", context);
  for (const auto& jv : field<json>(doc, "videos", context)) {
    VideoRecord v;
    v.id = field<std::string>(jv, "id", context);
    const std::string where = std::string(context) + ": video '" + v.id + "'";
    v.height = field<int>(jv, "height", where);
    v.width = field<int>(jv, "width", where);
    v.frames = field<std::vector<std::string>>(jv, "frames", where);
    m.videos.push_back(std::move(v));
  }
  for (const auto& je : field<json>(doc, "expressions", context)) {
    ExpressionRecord e;
    e.id = field<std::string>(je, "id", context);
    const std::string where = std::string(context) + ": expression '" + e.id + "'";
    e.video_id = field<std::string>(je, "video_id", where);
    e.text = field<std::string>(je, "text", where);
    e.object_ids = field<std::vector<int>>(je, "object_ids", where);
    if (je.contains("annotations")) e.annotations = field<std::vector<std::string>>(je, "annotations", where);
    m.expressions.push_back(std::move(e));
  }
  m.validate(context);
  return m;
}

void DatasetManifest::validate(std::string_view context) const {
  const std::string ctx(context);
  std::set<std::string> video_ids;
  for (const auto& v : videos) {
    if (v.id.empty()) throw FormatError(ctx + ": video with empty id");
    if (!video_ids.insert(v.id).second) throw FormatError(ctx + ": duplicate video '" + v.id + "'");
    if (v.height < 1 || v.width < 1) {
      throw FormatError(ctx + ": video '" + v.id + "' has invalid dimensions");
    }
    if (v.frames.empty()) throw FormatError(ctx + ": video '" + v.id + "' lists no frames");
  }
  std::set<std::pair<std::string, std::string>> expr_ids;
  for (const auto& e : expressions) {
    const std::string where = ctx + ": expression '" + e.id + "'";
    if (!video_ids.count(e.video_id)) {
      throw FormatError(where + " references unknown video '" + e.video_id + "'");
    }
    if (!expr_ids.insert({e.video_id, e.id}).second) throw FormatError(where + " is duplicated");
    for (int id : e.object_ids) {
      if (id < 1 || id > 255) throw FormatError(where + ": object id out of range 1..255");
    }
    if (!std::is_sorted(e.object_ids.begin(), e.object_ids.end()) ||
        std::adjacent_find(e.object_ids.begin(), e.object_ids.end()) != e.object_ids.end()) {
      throw FormatError(where + ": object ids must be sorted and unique");
    }
    if (!e.annotations.empty()) {
      if (e.object_ids.empty()) throw FormatError(where + ": ground truth without object ids");
      const auto& v = *std::find_if(videos.begin(), videos.end(),
                                    [&](const VideoRecord& r) { return r.id == e.video_id; });
      if (e.annotations.size() != v.frames.size()) {
        throw FormatError(where + ": " + std::to_string(e.annotations.size()) +
                          " annotations for " + std::to_string(v.frames.size()) + " frames");
      }
    }
  }
}

const VideoSequence& Dataset::video(const std::string& id) const {
  for (const auto& v : videos) {
    if (v.id() == id) return v;
  }
  throw Error("dataset has no video '" + id + "'");
}

fs::path resolve_path(const fs::path& root, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : root / path;
}

Dataset load_manifest(const fs::path& path) {
  const std::string ctx = path.string();
  Dataset ds;
  ds.manifest = DatasetManifest::from_json(read_file(path), ctx);
  ds.root = path.has_parent_path() ? path.parent_path() : fs::path(".");

  for (const auto& v : ds.manifest.videos) {
    std::vector<FrameRef> frames;
    for (const auto& f : v.frames) {
      const auto full = resolve_path(ds.root, f);
      if (!fs::exists(full)) {
        throw IoError(ctx + ": video '" + v.id + "': missing frame '" + full.string() + "'");
      }
      const auto [h, w] = read_png_size(full);
      if (h != v.height || w != v.width) {
        throw DimensionMismatch(ctx + ": video '" + v.id + "': frame '" + full.string() +
                                "' is " + std::to_string(h) + "x" + std::to_string(w) +
                                ", expected " + std::to_string(v.height) + "x" +
                                std::to_string(v.width));
      }
      frames.push_back({fs::absolute(full).lexically_normal().string(), nullptr});
    }
    ds.videos.emplace_back(v.id, v.height, v.width, std::move(frames));
  }

  for (const auto& e : ds.manifest.expressions) {
    ExpressionTask task{e.video_id, e.id, e.text, {e.object_ids.begin(), e.object_ids.end()}, {}};
    std::vector<LabelMap> labels;
    if (!e.annotations.empty()) {
      const auto& video = ds.video(e.video_id);
      MaskTrack gt(e.video_id);
      for (std::size_t t = 0; t < e.annotations.size(); ++t) {
        const auto full = resolve_path(ds.root, e.annotations[t]);
        if (!fs::exists(full)) {
          throw IoError(ctx + ": expression '" + e.id + "': missing annotation '" +
                        full.string() + "'");
        }
        LabelMap lm = read_label_png(full);
        if (lm.height() != video.height() || lm.width() != video.width()) {
          throw DimensionMismatch(ctx + ": expression '" + e.id + "': annotation '" +
                                  full.string() + "' does not match the video size");
        }
        gt.set(static_cast<int>(t), lm.select(e.object_ids));
        labels.push_back(std::move(lm));
      }
      task.ground_truth = std::move(gt);
    }
    ds.expressions.push_back(std::move(task));
    ds.annotations.push_back(std::move(labels));
  }
  return ds;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  manifest.validate(path.string());
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out << manifest.to_json();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void load_pixels(Dataset& dataset) {
  for (auto& v : dataset.videos) {
    if (v.has_pixels()) continue;
    std::vector<FrameRef> frames;
    for (const auto& f : v.frames()) {
      auto img = std::make_shared<const RgbImage>(read_rgb_png(f.path));
      frames.push_back({f.path, std::move(img)});
    }
    v = VideoSequence(v.id(), v.height(), v.width(), std::move(frames));
  }
}

}  // namespace rvosh
