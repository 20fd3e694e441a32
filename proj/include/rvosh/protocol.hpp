#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvosh/backend.hpp"
#include "rvosh/mask.hpp"

// Wire protocol v1: one JSON object per line over the worker's stdin/stdout.

namespace rvosh::wire {

inline constexpr int kProtocolVersion = 1;

struct IndexedMask {
  int index = 0;
  /// Canonical RLE text.
  std::string rle;
};

enum class RequestKind { Predict, Propagate };

/// Decoded request as a worker sees it.
struct Request {
  RequestKind kind = RequestKind::Predict;
  std::uint64_t id = 0;
  int height = 0;
  int width = 0;
  std::vector<std::string> frames;
  std::string expression;
  /// Predict: sampled indices. Propagate: targets in segment order.
  std::vector<int> indices;
  std::vector<IndexedMask> prompts;
  Direction direction = Direction::Forward;
};

struct Response {
  std::uint64_t id = 0;
  std::optional<std::string> error;
  std::vector<IndexedMask> masks;
};

std::string handshake_line();
/// Returns the advertised protocol version. Throws ProtocolError if the line
/// is not a ready handshake.
int parse_handshake(std::string_view line);

std::string encode_predict(std::uint64_t id, const PredictorRequest& request);
std::string encode_propagate(std::uint64_t id, const PropagateRequest& request);
/// Throws ProtocolError. Unknown fields are ignored.
Request parse_request(std::string_view line);

std::string encode_response(const Response& response);
/// Throws ProtocolError. Unknown fields are ignored.
Response parse_response(std::string_view line);

/// Masks of a successful response reordered to `expected` indices. Throws
/// ProtocolError for a missing, duplicate or unexpected index or bad RLE,
/// and DimensionMismatch for masks of the wrong size.
std::vector<BinaryMask> decode_masks(const Response& response, const std::vector<int>& expected,
                                     int height, int width);

}  // namespace rvosh::wire
