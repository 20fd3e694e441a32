#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvosh/random.hpp"

namespace rvosh {

enum class SamplingStrategy { FirstT, Uniform, UniformOffset, Random };

/// "first", "uniform", "uniform-offset", "random".
std::string_view to_string(SamplingStrategy s);
/// Throws std::invalid_argument on an unknown name.
SamplingStrategy parse_sampling_strategy(std::string_view name);

/// The frame indices handed to the predictor.
struct SamplingPlan {
  SamplingStrategy strategy = SamplingStrategy::Uniform;
  int total_frames = 0;
  int requested = 0;
  std::vector<int> indices;  // strictly increasing, all in [0, total_frames)
  std::optional<Seed> seed;
};

/// [0, 1, ..., min(T, I) - 1].
SamplingPlan plan_first(int total_frames, int requested);

/// Endpoint-inclusive even spacing: index_k = floor(k * (I - 1) / (T - 1)).
SamplingPlan plan_uniform(int total_frames, int requested);

/// Stride s = floor(I / T) with a seeded start offset in [0, s). Requires T <= I.
SamplingPlan plan_uniform_offset(int total_frames, int requested, Seed seed);

/// min(T, I) distinct indices drawn without replacement, sorted ascending.
SamplingPlan plan_random(int total_frames, int requested, Seed seed);

/// Dispatches on `strategy`. T is clamped to I for every strategy.
SamplingPlan make_plan(SamplingStrategy strategy, int total_frames, int requested, Seed seed);

}  // namespace rvosh
