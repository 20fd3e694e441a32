#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rvosh/mask.hpp"
#include "rvosh/video.hpp"

namespace rvosh {

/// Masks used to prompt the propagator, ordered by strictly increasing frame.
struct PromptSet {
  std::vector<std::pair<int, BinaryMask>> entries;

  std::vector<int> frames() const;
  /// Throws Error unless non-empty, strictly increasing and same-shaped.
  void validate() const;
};

enum class Direction { Forward, Backward };

/// Frames filled by propagating away from one prompt. Forward targets are
/// ascending and all after the prompt; Backward targets are descending and
/// all before it.
struct PropagationSegment {
  int prompt_frame = 0;
  Direction direction = Direction::Forward;
  std::vector<int> targets;

  friend bool operator==(const PropagationSegment&, const PropagationSegment&) = default;
};

struct PredictorRequest {
  const VideoSequence& video;
  std::string expression_id;
  std::string expression_text;
  std::vector<int> indices;
};

struct PropagateRequest {
  const VideoSequence& video;
  std::string expression_id;
  const PromptSet& prompts;
  PropagationSegment segment;
};

/// First stage: one independent mask per sampled frame.
class PredictorBackend {
 public:
  virtual ~PredictorBackend() = default;
  /// Returns a partial track holding exactly the requested frames.
  virtual MaskTrack predict(const PredictorRequest& request) = 0;
  /// True when one instance may serve concurrent callers.
  virtual bool shareable() const = 0;
};

/// Second stage: fills the frames of one segment from the prompts.
class PropagatorBackend {
 public:
  virtual ~PropagatorBackend() = default;
  /// One mask per segment target, in segment order.
  virtual std::vector<BinaryMask> propagate(const PropagateRequest& request) = 0;
  virtual bool shareable() const = 0;
};

}  // namespace rvosh
