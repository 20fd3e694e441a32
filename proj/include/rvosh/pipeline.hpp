#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rvosh/backend.hpp"
#include "rvosh/random.hpp"
#include "rvosh/sampling.hpp"
#include "rvosh/video.hpp"

namespace rvosh {

enum class PipelineMode {
  /// Single first-mask prompt streamed forward through the whole video.
  Legacy,
  /// Per-frame initial masks, pinned, with propagation filling the gaps.
  Consistent,
};

std::string_view to_string(PipelineMode mode);
PipelineMode parse_pipeline_mode(std::string_view name);

/// Which initial masks prompt the propagator: all of them, or the first k.
class PromptPolicy {
 public:
  static PromptPolicy all() { return PromptPolicy(0); }
  static PromptPolicy first(int k);
  /// "all" or "first:K".
  static PromptPolicy parse(std::string_view text);

  bool is_all() const noexcept { return k_ == 0; }
  int k() const noexcept { return k_; }
  std::string to_string() const;

  friend bool operator==(PromptPolicy, PromptPolicy) = default;

 private:
  explicit PromptPolicy(int k) : k_(k) {}
  int k_;
};

struct PipelineConfig {
  PipelineMode mode = PipelineMode::Consistent;
  SamplingStrategy sampling = SamplingStrategy::Uniform;
  int frames = 5;
  PromptPolicy prompt_policy = PromptPolicy::all();
  /// Unset means default_boundary_tolerance() of the video.
  std::optional<double> boundary_tolerance;
  Seed seed;

  /// Throws std::invalid_argument on a bad combination.
  void validate() const;
};

PromptSet select_prompts(const MaskTrack& initial, PromptPolicy policy);

/// Backward segment from the earliest prompt to frame 0, then one forward
/// segment per prompt up to the next prompt (the last one runs to the end).
std::vector<PropagationSegment> partition_propagation(std::span<const int> prompt_frames,
                                                      int frame_count);

/// The sampling plan a pipeline run would use for this (video, expression).
SamplingPlan plan_for(const VideoSequence& video, const ExpressionTask& task,
                      const PipelineConfig& cfg);

MaskTrack run_consistent(const VideoSequence& video, const ExpressionTask& task,
                         const PipelineConfig& cfg, PredictorBackend& predictor,
                         PropagatorBackend& propagator);

MaskTrack run_legacy(const VideoSequence& video, const ExpressionTask& task,
                     const PipelineConfig& cfg, PredictorBackend& predictor,
                     PropagatorBackend& propagator);

/// Dispatches on cfg.mode.
MaskTrack run_pipeline(const VideoSequence& video, const ExpressionTask& task,
                       const PipelineConfig& cfg, PredictorBackend& predictor,
                       PropagatorBackend& propagator);

}  // namespace rvosh
