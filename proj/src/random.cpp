#include "rvosh/random.hpp"

#include <limits>
#include <stdexcept>

namespace rvosh {

std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Seed derive_seed(Seed parent, std::string_view video_id, std::string_view expression_id,
                 std::string_view purpose) {
  // Length-prefix each component so ("ab","c") and ("a","bc") differ.
  std::uint64_t h = fnv1a64({});
  for (std::string_view part : {video_id, expression_id, purpose}) {
    const auto len = static_cast<std::uint64_t>(part.size());
    h = mix64(h ^ len);
    h = fnv1a64(part, h);
  }
  return Seed{mix64(parent.value ^ mix64(h))};
}

std::uint64_t CounterRng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be > 0");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t v = next();
    if (v < limit) return v % bound;
  }
}

}  // namespace rvosh
