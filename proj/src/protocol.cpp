#include "rvosh/protocol.hpp"

#include <map>

#include "json.hpp"
#include "rvosh/error.hpp"
#include "rvosh/rle.hpp"

namespace rvosh::wire {
namespace {

using nlohmann::json;

json parse_object(std::string_view line, const char* what) {
  json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ProtocolError(std::string(what) + " is not a JSON object: " +
                        std::string(line.substr(0, 200)));
  }
  return doc;
}

template <class T>
T field(const json& doc, const char* key, const char* what) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ProtocolError(std::string(what) + " lacks '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ProtocolError(std::string(what) + " has a malformed '" + key + "'");
  }
}

std::vector<IndexedMask> parse_masks(const json& doc, const char* key, const char* what) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_array()) {
    throw ProtocolError(std::string(what) + " lacks a '" + key + "' array");
  }
  std::vector<IndexedMask> out;
  for (const auto& m : *it) {
    if (!m.is_object()) throw ProtocolError(std::string(what) + ": mask entry is not an object");
    out.push_back({field<int>(m, "index", what), field<std::string>(m, "rle", what)});
  }
  return out;
}

json frame_paths(const VideoSequence& video) {
  json paths = json::array();
  for (const auto& f : video.frames()) paths.push_back(f.path);
  return paths;
}

}  // namespace

std::string handshake_line() {
  return json{{"ready", true}, {"protocol", kProtocolVersion}}.dump();
}

int parse_handshake(std::string_view line) {
  const json doc = parse_object(line, "handshake");
  if (doc.value("ready", false) != true) throw ProtocolError("worker did not report ready");
  return field<int>(doc, "protocol", "handshake");
}

std::string encode_predict(std::uint64_t id, const PredictorRequest& request) {
  nlohmann::ordered_json doc;
  doc["kind"] = "predict";
  doc["id"] = id;
  doc["expression"] = request.expression_text;
  doc["frames"] = frame_paths(request.video);
  doc["indices"] = request.indices;
  doc["height"] = request.video.height();
  doc["width"] = request.video.width();
  return doc.dump();
}

std::string encode_propagate(std::uint64_t id, const PropagateRequest& request) {
  nlohmann::ordered_json doc;
  doc["kind"] = "propagate";
  doc["id"] = id;
  doc["frames"] = frame_paths(request.video);
  auto& prompts = doc["prompts"] = nlohmann::ordered_json::array();
  for (const auto& [index, mask] : request.prompts.entries) {
    prompts.push_back({{"index", index}, {"rle", rle_encode_text(mask)}});
  }
  doc["targets"] = request.segment.targets;
  doc["direction"] = request.segment.direction == Direction::Forward ? "fwd" : "bwd";
  doc["height"] = request.video.height();
  doc["width"] = request.video.width();
  return doc.dump();
}

Request parse_request(std::string_view line) {
  const json doc = parse_object(line, "request");
  Request r;
  const auto kind = field<std::string>(doc, "kind", "request");
  r.id = field<std::uint64_t>(doc, "id", "request");
  r.height = field<int>(doc, "height", "request");
  r.width = field<int>(doc, "width", "request");
  r.frames = field<std::vector<std::string>>(doc, "frames", "request");
  if (kind == "predict") {
    r.kind = RequestKind::Predict;
    r.expression = field<std::string>(doc, "expression", "request");
    r.indices = field<std::vector<int>>(doc, "indices", "request");
  } else if (kind == "propagate") {
    r.kind = RequestKind::Propagate;
    r.prompts = parse_masks(doc, "prompts", "request");
    r.indices = field<std::vector<int>>(doc, "targets", "request");
    const auto dir = field<std::string>(doc, "direction", "request");
    if (dir == "fwd") {
      r.direction = Direction::Forward;
    } else if (dir == "bwd") {
      r.direction = Direction::Backward;
    } else {
      throw ProtocolError("request has unknown direction '" + dir + "'");
    }
  } else {
    throw ProtocolError("unknown request kind '" + kind + "'");
  }
  return r;
}

std::string encode_response(const Response& response) {
  nlohmann::ordered_json doc;
  doc["id"] = response.id;
  if (response.error) {
    doc["error"] = *response.error;
  } else {
    auto& masks = doc["masks"] = nlohmann::ordered_json::array();
    for (const auto& m : response.masks) masks.push_back({{"index", m.index}, {"rle", m.rle}});
  }
  return doc.dump();
}

Response parse_response(std::string_view line) {
  const json doc = parse_object(line, "response");
  Response r;
  r.id = field<std::uint64_t>(doc, "id", "response");
  if (doc.contains("error")) {
    const auto& e = doc["error"];
    r.error = e.is_string() ? e.get<std::string>() : e.dump();
    return r;
  }
  r.masks = parse_masks(doc, "masks", "response");
  return r;
}

std::vector<BinaryMask> decode_masks(const Response& response, const std::vector<int>& expected,
                                     int height, int width) {
  std::map<int, const IndexedMask*> by_index;
  for (const auto& m : response.masks) {
    if (!by_index.emplace(m.index, &m).second) {
      throw ProtocolError("response repeats frame " + std::to_string(m.index));
    }
  }
  std::vector<BinaryMask> out;
  out.reserve(expected.size());
  for (int index : expected) {
    const auto it = by_index.find(index);
    if (it == by_index.end()) throw ProtocolError("response misses frame " + std::to_string(index));
    BinaryMask mask = [&] {
      try {
        return rle_decode_text(it->second->rle);
      } catch (const FormatError& e) {
        throw ProtocolError("frame " + std::to_string(index) + ": " + e.what());
      }
    }();
    if (mask.height() != height || mask.width() != width) {
      throw DimensionMismatch("frame " + std::to_string(index) + ": worker mask is " +
                              std::to_string(mask.height()) + "x" + std::to_string(mask.width()) +
                              ", video is " + std::to_string(height) + "x" +
                              std::to_string(width));
    }
    out.push_back(std::move(mask));
    by_index.erase(it);
  }
  if (!by_index.empty()) {
    throw ProtocolError("response has unrequested frame " + std::to_string(by_index.begin()->first));
  }
  return out;
}

}  // namespace rvosh::wire
