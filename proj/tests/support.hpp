#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rvosh/harness.hpp"
#include "rvosh/manifest.hpp"
#include "rvosh/metrics.hpp"

namespace support {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag = "rvosh");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Writes a bundled preset under `dir` and loads it back with pixels.
rvosh::Dataset load_preset(std::string_view name, const std::filesystem::path& dir);

/// Runs every expression and scores the dataset. Throws if any expression fails.
rvosh::DatasetScore run_and_score(const rvosh::Dataset& dataset, const rvosh::PipelineConfig& cfg,
                                  const rvosh::BackendOptions& backend, int workers = 1);

// Toy predictor noise used by the directional checks. With this seed the
// late-appearance scene swaps its frame-0 prediction for the distractor while
// the frame-4 and every uniformly sampled prediction stay clean, and the
// conflict scene keeps frame 0 clean while a later sampled frame is swapped.
inline constexpr double kToySwap = 0.5;
inline constexpr std::uint64_t kToySeed = 3;

rvosh::BackendOptions noisy_toy();

/// Reads a whole file as bytes.
std::string slurp(const std::filesystem::path& p);

/// Relative path -> contents for every regular file under `root`.
std::vector<std::pair<std::string, std::string>> tree_contents(const std::filesystem::path& root);

/// One published score triple, in tenths of a percent.
struct ScoreRow {
  const char* label;
  int jf;
  int j;
  int f;
};

/// Every published row that prints all three of J&F, J and F.
const std::vector<ScoreRow>& published_rows();

/// |printed J&F - (J + F) / 2| <= 0.05, checked exactly on tenths.
inline bool arithmetic_mean_consistent(const ScoreRow& r) {
  const int d = 2 * r.jf - (r.j + r.f);
  return d >= -1 && d <= 1;
}

/// sqrt(J * F) rounded half-up to one decimal, in tenths.
int geometric_mean_tenths(const ScoreRow& r);

}  // namespace support
