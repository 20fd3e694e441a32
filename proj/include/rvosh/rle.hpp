#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rvosh/mask.hpp"

namespace rvosh {

/// Row-major run lengths alternating zeros and ones, starting with zeros.
/// Canonical text form (also used on the wire): "<h> <w>:<c0> <c1> ...",
/// e.g. "2 2:0 1 2 1". Only the first count may be zero.
struct RleText {
  int height = 0;
  int width = 0;
  std::vector<std::uint64_t> counts;

  std::string to_string() const;
  /// Throws FormatError for a malformed header or a non-numeric token.
  static RleText parse(std::string_view text);

  friend bool operator==(const RleText&, const RleText&) = default;
};

RleText rle_encode(const BinaryMask& m);
/// Throws FormatError if counts do not sum to h*w or are not canonical.
BinaryMask rle_decode(const RleText& rle);

inline std::string rle_encode_text(const BinaryMask& m) { return rle_encode(m).to_string(); }
inline BinaryMask rle_decode_text(std::string_view text) { return rle_decode(RleText::parse(text)); }

}  // namespace rvosh
