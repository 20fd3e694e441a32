#include "rvosh/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "rvosh/error.hpp"

namespace rvosh {
namespace {

void check_prediction(const MaskTrack& initial, const SamplingPlan& plan,
                      const VideoSequence& video) {
  if (initial.frames() != plan.indices) {
    throw BackendError("predictor returned a frame set different from the sampled frames");
  }
  for (const auto& [frame, mask] : initial.entries()) {
    if (mask.height() != video.height() || mask.width() != video.width()) {
      throw BackendError("predictor mask at frame " + std::to_string(frame) +
                         " does not match the video dimensions");
    }
  }
}

MaskTrack predict_initial(const VideoSequence& video, const ExpressionTask& task,
                          const SamplingPlan& plan, PredictorBackend& predictor) {
  PredictorRequest req{video, task.expression_id, task.text, plan.indices};
  MaskTrack initial = predictor.predict(req);
  check_prediction(initial, plan, video);
  return initial;
}

/// Pins the prompts and fills every other frame segment by segment.
MaskTrack fill_from_prompts(const VideoSequence& video, const ExpressionTask& task,
                            const PromptSet& prompts, PropagatorBackend& propagator) {
  MaskTrack out(video.id());
  for (const auto& [frame, mask] : prompts.entries) out.set(frame, mask);

  const auto frames = prompts.frames();
  for (auto& segment : partition_propagation(frames, video.frame_count())) {
    PropagateRequest req{video, task.expression_id, prompts, segment};
    auto masks = propagator.propagate(req);
    if (masks.size() != segment.targets.size()) {
      throw BackendError("propagator returned " + std::to_string(masks.size()) +
                         " masks for a segment of " + std::to_string(segment.targets.size()));
    }
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (masks[i].height() != video.height() || masks[i].width() != video.width()) {
        throw BackendError("propagator mask does not match the video dimensions");
      }
      out.set(segment.targets[i], std::move(masks[i]));
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(PipelineMode mode) {
  return mode == PipelineMode::Legacy ? "legacy" : "consistent";
}

PipelineMode parse_pipeline_mode(std::string_view name) {
  if (name == "legacy") return PipelineMode::Legacy;
  if (name == "consistent") return PipelineMode::Consistent;
  throw std::invalid_argument("unknown pipeline mode '" + std::string(name) + "'");
}

PromptPolicy PromptPolicy::first(int k) {
  if (k < 1) throw std::invalid_argument("prompt policy first:K needs K >= 1");
  return PromptPolicy(k);
}

PromptPolicy PromptPolicy::parse(std::string_view text) {
  if (text == "all") return all();
  constexpr std::string_view prefix = "first:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    int k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
      return first(k);
    }
  }
  throw std::invalid_argument("prompt policy must be 'all' or 'first:K', got '" +
                              std::string(text) + "'");
}

std::string PromptPolicy::to_string() const {
  return is_all() ? "all" : "first:" + std::to_string(k_);
}

void PipelineConfig::validate() const {
  if (frames < 1) throw std::invalid_argument("frames T must be >= 1");
  if (!prompt_policy.is_all() && prompt_policy.k() > frames) {
    throw std::invalid_argument("prompt policy first:K requires K <= frames T");
  }
  if (boundary_tolerance && *boundary_tolerance < 0.0) {
    throw std::invalid_argument("boundary tolerance must be >= 0");
  }
}

std::vector<int> PromptSet::frames() const {
  std::vector<int> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.first);
  return out;
}

void PromptSet::validate() const {
  if (entries.empty()) throw Error("prompt set is empty");
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].first <= entries[i - 1].first) {
      throw Error("prompt frames must be strictly increasing");
    }
    if (!entries[i].second.same_shape(entries[0].second)) {
      throw DimensionMismatch("prompt masks differ in shape");
    }
  }
}

PromptSet select_prompts(const MaskTrack& initial, PromptPolicy policy) {
  if (initial.empty()) throw Error("select_prompts: no initial masks");
  const std::size_t keep = policy.is_all() ? initial.size() : static_cast<std::size_t>(policy.k());
  if (keep > initial.size()) {
    throw Error("select_prompts: first:" + std::to_string(policy.k()) + " exceeds the " +
                std::to_string(initial.size()) + " available masks");
  }
  PromptSet out;
  for (const auto& [frame, mask] : initial.entries()) {
    if (out.entries.size() == keep) break;
    out.entries.emplace_back(frame, mask);
  }
  return out;
}

std::vector<PropagationSegment> partition_propagation(std::span<const int> prompt_frames,
                                                      int frame_count) {
  if (prompt_frames.empty()) throw std::invalid_argument("partition_propagation: no prompts");
  for (std::size_t i = 0; i < prompt_frames.size(); ++i) {
    const int p = prompt_frames[i];
    if (p < 0 || p >= frame_count) {
      throw std::invalid_argument("partition_propagation: prompt frame out of range");
    }
    if (i > 0 && p <= prompt_frames[i - 1]) {
      throw std::invalid_argument("partition_propagation: prompt frames must be increasing");
    }
  }

  std::vector<PropagationSegment> out;
  const int earliest = prompt_frames.front();
  if (earliest > 0) {
    PropagationSegment back{earliest, Direction::Backward, {}};
    for (int t = earliest - 1; t >= 0; --t) back.targets.push_back(t);
    out.push_back(std::move(back));
  }
  for (std::size_t i = 0; i < prompt_frames.size(); ++i) {
    const int p = prompt_frames[i];
    const int stop = i + 1 < prompt_frames.size() ? prompt_frames[i + 1] : frame_count;
    if (p + 1 >= stop) continue;
    PropagationSegment fwd{p, Direction::Forward, {}};
    for (int t = p + 1; t < stop; ++t) fwd.targets.push_back(t);
    out.push_back(std::move(fwd));
  }
  return out;
}

SamplingPlan plan_for(const VideoSequence& video, const ExpressionTask& task,
                      const PipelineConfig& cfg) {
  const Seed seed = derive_seed(cfg.seed, video.id(), task.expression_id, "sampling");
  return make_plan(cfg.sampling, video.frame_count(), cfg.frames, seed);
}

MaskTrack run_consistent(const VideoSequence& video, const ExpressionTask& task,
                         const PipelineConfig& cfg, PredictorBackend& predictor,
                         PropagatorBackend& propagator) {
  if (cfg.mode != PipelineMode::Consistent) {
    throw std::invalid_argument("run_consistent called with a non-consistent config");
  }
  cfg.validate();
  const SamplingPlan plan = plan_for(video, task, cfg);
  const MaskTrack initial = predict_initial(video, task, plan, predictor);

  // A short video can yield fewer sampled frames than K; use what exists.
  PromptPolicy policy = cfg.prompt_policy;
  if (!policy.is_all() && static_cast<std::size_t>(policy.k()) > initial.size()) {
    policy = PromptPolicy::first(static_cast<int>(initial.size()));
  }
  const PromptSet prompts = select_prompts(initial, policy);
  return fill_from_prompts(video, task, prompts, propagator);
}

MaskTrack run_legacy(const VideoSequence& video, const ExpressionTask& task,
                     const PipelineConfig& cfg, PredictorBackend& predictor,
                     PropagatorBackend& propagator) {
  if (cfg.mode != PipelineMode::Legacy) {
    throw std::invalid_argument("run_legacy called with a non-legacy config");
  }
  cfg.validate();
  const SamplingPlan plan = plan_for(video, task, cfg);
  const MaskTrack initial = predict_initial(video, task, plan, predictor);
  // Only the earliest prediction seeds the stream; later sampled frames are
  // re-predicted by propagation rather than pinned.
  const PromptSet prompts = select_prompts(initial, PromptPolicy::first(1));
  return fill_from_prompts(video, task, prompts, propagator);
}

MaskTrack run_pipeline(const VideoSequence& video, const ExpressionTask& task,
                       const PipelineConfig& cfg, PredictorBackend& predictor,
                       PropagatorBackend& propagator) {
  return cfg.mode == PipelineMode::Legacy ? run_legacy(video, task, cfg, predictor, propagator)
                                          : run_consistent(video, task, cfg, predictor, propagator);
}

}  // namespace rvosh
