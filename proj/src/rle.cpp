#include "rvosh/rle.hpp"

#include <charconv>

#include "rvosh/error.hpp"

namespace rvosh {
namespace {

/// Splits on single spaces; empty tokens (double spaces, leading space) are errors.
std::vector<std::string_view> split_tokens(std::string_view s, std::string_view what) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(' ', start);
    const auto tok = s.substr(start, end == std::string_view::npos ? s.npos : end - start);
    if (tok.empty()) throw FormatError("RLE " + std::string(what) + ": empty token");
    out.push_back(tok);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view tok, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw FormatError("RLE " + std::string(what) + ": non-numeric token '" + std::string(tok) +
                      "'");
  }
  return value;
}

}  // namespace

std::string RleText::to_string() const {
  std::string out = std::to_string(height) + " " + std::to_string(width) + ":";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(counts[i]);
  }
  return out;
}

RleText RleText::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw FormatError("RLE: missing ':' after header");
  const auto header = split_tokens(text.substr(0, colon), "header");
  if (header.size() != 2) throw FormatError("RLE header: expected '<height> <width>'");
  RleText out;
  out.height = parse_number<int>(header[0], "header");
  out.width = parse_number<int>(header[1], "header");
  if (out.height < 1 || out.width < 1) throw FormatError("RLE header: dimensions must be >= 1");
  for (auto tok : split_tokens(text.substr(colon + 1), "counts")) {
    out.counts.push_back(parse_number<std::uint64_t>(tok, "counts"));
  }
  return out;
}

RleText rle_encode(const BinaryMask& m) {
  RleText out{m.height(), m.width(), {}};
  std::uint8_t current = 0;
  std::uint64_t run = 0;
  for (auto b : m.bits()) {
    if (b != current) {
      out.counts.push_back(run);
      current = b;
      run = 0;
    }
    ++run;
  }
  out.counts.push_back(run);
  return out;
}

BinaryMask rle_decode(const RleText& rle) {
  if (rle.height < 1 || rle.width < 1) throw FormatError("RLE: dimensions must be >= 1");
  const auto total = static_cast<std::uint64_t>(rle.height) * static_cast<std::uint64_t>(rle.width);
  if (rle.counts.empty()) throw FormatError("RLE: no run counts");
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < rle.counts.size(); ++i) {
    if (i > 0 && rle.counts[i] == 0) throw FormatError("RLE: zero-length run after the first");
    sum += rle.counts[i];
    if (sum > total) break;
  }
  if (sum != total) {
    throw FormatError("RLE: run counts sum to " + std::to_string(sum) + ", expected " +
                      std::to_string(total));
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(total));
  std::uint8_t value = 0;
  for (auto c : rle.counts) {
    bits.insert(bits.end(), static_cast<std::size_t>(c), value);
    value ^= 1;
  }
  return BinaryMask(rle.height, rle.width, std::move(bits));
}

}  // namespace rvosh
