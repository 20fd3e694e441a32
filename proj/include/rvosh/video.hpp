#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rvosh/mask.hpp"

namespace rvosh {

/// A frame is either a file on disk, pixels in memory, or both.
struct FrameRef {
  std::string path;
  std::shared_ptr<const RgbImage> pixels;
};

/// Ordered frames of one video. Frame indices are 0-based and contiguous.
class VideoSequence {
 public:
  VideoSequence(std::string id, int height, int width, std::vector<FrameRef> frames);

  const std::string& id() const noexcept { return id_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int frame_count() const noexcept { return static_cast<int>(frames_.size()); }
  const std::vector<FrameRef>& frames() const noexcept { return frames_; }
  const FrameRef& frame(int index) const;

  bool has_pixels() const;
  /// Throws Error if the frame has no in-memory pixels.
  const RgbImage& pixels(int index) const;

 private:
  std::string id_;
  int height_;
  int width_;
  std::vector<FrameRef> frames_;
};

/// One binary mask per frame index for one expression.
class MaskTrack {
 public:
  MaskTrack() = default;
  explicit MaskTrack(std::string video_id) : video_id_(std::move(video_id)) {}

  const std::string& video_id() const noexcept { return video_id_; }
  const std::map<int, BinaryMask>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Inserts or replaces. Throws DimensionMismatch if `mask` disagrees with
  /// masks already present, std::invalid_argument for a negative index.
  void set(int frame, BinaryMask mask);
  bool contains(int frame) const { return entries_.count(frame) != 0; }
  /// Throws Error when the frame is missing.
  const BinaryMask& at(int frame) const;

  std::vector<int> frames() const;
  /// Key set is exactly {0..frame_count-1}.
  bool is_full(int frame_count) const;

  friend bool operator==(const MaskTrack&, const MaskTrack&) = default;

 private:
  std::string video_id_;
  std::map<int, BinaryMask> entries_;
};

struct ExpressionTask {
  std::string video_id;
  std::string expression_id;
  std::string text;
  std::set<int> object_ids;
  std::optional<MaskTrack> ground_truth;

  /// Checks the invariants against the owning video; throws on violation.
  void validate(const VideoSequence& video) const;
};

}  // namespace rvosh
