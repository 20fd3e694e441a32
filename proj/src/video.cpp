#include "rvosh/video.hpp"

#include <stdexcept>

#include "rvosh/error.hpp"

namespace rvosh {

VideoSequence::VideoSequence(std::string id, int height, int width, std::vector<FrameRef> frames)
    : id_(std::move(id)), height_(height), width_(width), frames_(std::move(frames)) {
  if (height < 1 || width < 1) throw std::invalid_argument("video dimensions must be >= 1");
  if (frames_.empty()) throw std::invalid_argument("video '" + id_ + "' has no frames");
  for (const auto& f : frames_) {
    if (f.pixels && (f.pixels->height() != height || f.pixels->width() != width)) {
      throw DimensionMismatch("video '" + id_ + "': frame dimensions differ from video");
    }
  }
}

const FrameRef& VideoSequence::frame(int index) const {
  if (index < 0 || index >= frame_count()) {
    throw std::out_of_range("frame index " + std::to_string(index) + " out of range for video '" +
                            id_ + "'");
  }
  return frames_[static_cast<std::size_t>(index)];
}

bool VideoSequence::has_pixels() const {
  for (const auto& f : frames_) {
    if (!f.pixels) return false;
  }
  return true;
}

const RgbImage& VideoSequence::pixels(int index) const {
  const auto& f = frame(index);
  if (!f.pixels) {
    throw Error("video '" + id_ + "' frame " + std::to_string(index) + " has no pixels loaded");
  }
  return *f.pixels;
}

void MaskTrack::set(int frame, BinaryMask mask) {
  if (frame < 0) throw std::invalid_argument("negative frame index");
  if (!entries_.empty() && !entries_.begin()->second.same_shape(mask)) {
    throw DimensionMismatch("track '" + video_id_ + "': mask at frame " + std::to_string(frame) +
                            " has a different shape");
  }
  entries_.insert_or_assign(frame, std::move(mask));
}

const BinaryMask& MaskTrack::at(int frame) const {
  auto it = entries_.find(frame);
  if (it == entries_.end()) {
    throw Error("track '" + video_id_ + "' has no mask for frame " + std::to_string(frame));
  }
  return it->second;
}

std::vector<int> MaskTrack::frames() const {
  std::vector<int> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

bool MaskTrack::is_full(int frame_count) const {
  if (static_cast<int>(entries_.size()) != frame_count) return false;
  // Keys are sorted and non-negative; the count check makes this sufficient.
  return entries_.empty() || entries_.rbegin()->first == frame_count - 1;
}

void ExpressionTask::validate(const VideoSequence& video) const {
  if (video_id != video.id()) {
    throw Error("expression '" + expression_id + "' references video '" + video_id +
                "' but was paired with '" + video.id() + "'");
  }
  if (!ground_truth) return;
  if (object_ids.empty()) {
    throw Error("expression '" + expression_id + "' has ground truth but no object ids");
  }
  if (!ground_truth->is_full(video.frame_count())) {
    throw Error("expression '" + expression_id + "' ground truth does not cover every frame");
  }
  const auto& first = ground_truth->entries().begin()->second;
  if (first.height() != video.height() || first.width() != video.width()) {
    throw DimensionMismatch("expression '" + expression_id +
                            "' ground truth dimensions differ from video");
  }
}

}  // namespace rvosh
