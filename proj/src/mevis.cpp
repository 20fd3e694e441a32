#include "rvosh/mevis.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rvosh/error.hpp"
#include "rvosh/png_io.hpp"

namespace rvosh {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string as_manifest_path(const fs::path& p, const fs::path& base) {
  const fs::path abs = fs::absolute(p).lexically_normal();
  if (base.empty()) return abs.generic_string();
  return abs.lexically_relative(fs::absolute(base).lexically_normal()).generic_string();
}

std::vector<int> id_list(const ordered_json& expr, const char* key, const std::string& where) {
  std::vector<int> out;
  if (!expr.contains(key)) return out;
  try {
    out = expr.at(key).get<std::vector<int>>();
  } catch (const ordered_json::exception&) {
    throw FormatError(where + ": '" + key + "' must be a list of integers");
  }
  return out;
}

}  // namespace

MevisImportResult import_mevis_meta(const fs::path& meta_path, const fs::path& annotations_root,
                                    const MevisImportOptions& options) {
  std::ifstream in(meta_path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + meta_path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  ordered_json doc;
  try {
    doc = ordered_json::parse(ss.str());
  } catch (const ordered_json::parse_error& e) {
    throw FormatError(meta_path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.contains("videos") || !doc["videos"].is_object()) {
    throw FormatError(meta_path.string() + ": missing 'videos' object");
  }
  const fs::path frames_root = options.frames_root.empty()
                                   ? annotations_root.parent_path() / "JPEGImages"
                                   : options.frames_root;

  MevisImportResult result;
  result.manifest.name = options.dataset_name;
  for (const auto& [vid, jv] : doc["videos"].items()) {
    const std::string where = meta_path.string() + ": video '" + vid + "'";
    if (!jv.contains("frames") || !jv.contains("expressions") || !jv["expressions"].is_object()) {
      throw FormatError(where + ": needs 'frames' and 'expressions'");
    }
    if (jv["expressions"].empty()) {
      result.warnings.push_back("video '" + vid + "' has no expressions; skipped");
      continue;
    }
    const auto frame_names = jv["frames"].get<std::vector<std::string>>();
    if (frame_names.empty()) throw FormatError(where + ": empty frame list");

    VideoRecord video{vid, 0, 0, {}};
    std::vector<std::string> annotations;
    for (const auto& name : frame_names) {
      const fs::path anno = annotations_root / vid / (name + ".png");
      if (!fs::exists(anno)) {
        throw IoError(where + ": missing annotation file '" + anno.string() + "'");
      }
      const auto [h, w] = read_png_size(anno);
      if (video.height == 0) {
        video.height = h;
        video.width = w;
      } else if (h != video.height || w != video.width) {
        throw DimensionMismatch(where + ": annotation '" + anno.string() + "' changes size");
      }
      annotations.push_back(as_manifest_path(anno, options.manifest_dir));
      video.frames.push_back(
          as_manifest_path(frames_root / vid / (name + options.frame_extension), options.manifest_dir));
    }

    for (const auto& [eid, je] : jv["expressions"].items()) {
      const std::string ewhere = where + ", expression '" + eid + "'";
      ExpressionRecord expr;
      expr.id = eid;
      expr.video_id = vid;
      expr.text = je.value("exp", std::string{});
      expr.object_ids = id_list(je, "anno_id", ewhere);
      const auto obj_ids = id_list(je, "obj_id", ewhere);
      if (expr.object_ids.empty()) throw FormatError(ewhere + ": no 'anno_id' entries");
      if (!obj_ids.empty() && obj_ids.size() != expr.object_ids.size()) {
        throw FormatError(ewhere + ": 'anno_id' and 'obj_id' lengths differ");
      }
      for (int id : expr.object_ids) {
        if (id < 1 || id > 255) throw FormatError(ewhere + ": annotation id out of range 1..255");
      }
      std::sort(expr.object_ids.begin(), expr.object_ids.end());
      expr.object_ids.erase(std::unique(expr.object_ids.begin(), expr.object_ids.end()),
                            expr.object_ids.end());
      expr.annotations = annotations;
      result.manifest.expressions.push_back(std::move(expr));
    }
    result.manifest.videos.push_back(std::move(video));
  }
  if (result.manifest.expressions.empty()) {
    result.warnings.push_back(meta_path.string() + ": no expressions found; manifest is empty");
  }
  result.manifest.validate(meta_path.string());
  return result;
}

}  // namespace rvosh
