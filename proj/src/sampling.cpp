#include "rvosh/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rvosh {
namespace {

void check_counts(int total_frames, int requested) {
  if (total_frames < 1) throw std::invalid_argument("sampling: frame count must be >= 1");
  if (requested < 1) throw std::invalid_argument("sampling: requested frames must be >= 1");
}

}  // namespace

std::string_view to_string(SamplingStrategy s) {
  switch (s) {
    case SamplingStrategy::FirstT: return "first";
    case SamplingStrategy::Uniform: return "uniform";
    case SamplingStrategy::UniformOffset: return "uniform-offset";
    case SamplingStrategy::Random: return "random";
  }
  return "unknown";
}

SamplingStrategy parse_sampling_strategy(std::string_view name) {
  for (auto s : {SamplingStrategy::FirstT, SamplingStrategy::Uniform,
                 SamplingStrategy::UniformOffset, SamplingStrategy::Random}) {
    if (name == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown sampling strategy '" + std::string(name) + "'");
}

SamplingPlan plan_first(int total_frames, int requested) {
  check_counts(total_frames, requested);
  SamplingPlan plan{SamplingStrategy::FirstT, total_frames, requested, {}, std::nullopt};
  plan.indices.resize(static_cast<std::size_t>(std::min(total_frames, requested)));
  std::iota(plan.indices.begin(), plan.indices.end(), 0);
  return plan;
}

SamplingPlan plan_uniform(int total_frames, int requested) {
  check_counts(total_frames, requested);
  SamplingPlan plan{SamplingStrategy::Uniform, total_frames, requested, {}, std::nullopt};
  if (requested >= total_frames) {
    plan.indices.resize(static_cast<std::size_t>(total_frames));
    std::iota(plan.indices.begin(), plan.indices.end(), 0);
  } else if (requested == 1) {
    plan.indices = {0};
  } else {
    // Integer arithmetic keeps the floor exact; (T-1) <= (I-1) so steps are >= 1.
    const long long span = total_frames - 1;
    const long long steps = requested - 1;
    for (long long k = 0; k <= steps; ++k) {
      plan.indices.push_back(static_cast<int>(k * span / steps));
    }
  }
  return plan;
}

SamplingPlan plan_uniform_offset(int total_frames, int requested, Seed seed) {
  check_counts(total_frames, requested);
  if (requested > total_frames) {
    throw std::invalid_argument("uniform-offset sampling requires T <= I");
  }
  SamplingPlan plan{SamplingStrategy::UniformOffset, total_frames, requested, {}, seed};
  const int stride = total_frames / requested;
  int offset = 0;
  if (stride > 1) {
    CounterRng rng(seed);
    offset = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(stride)));
  }
  for (int k = 0; k < requested; ++k) plan.indices.push_back(offset + k * stride);
  return plan;
}

SamplingPlan plan_random(int total_frames, int requested, Seed seed) {
  check_counts(total_frames, requested);
  SamplingPlan plan{SamplingStrategy::Random, total_frames, requested, {}, seed};
  const int count = std::min(total_frames, requested);
  std::vector<int> pool(static_cast<std::size_t>(total_frames));
  std::iota(pool.begin(), pool.end(), 0);
  // Partial Fisher-Yates with our own bounded draw; std::uniform_int_distribution
  // is implementation-defined and would break cross-platform determinism.
  CounterRng rng(seed);
  for (int i = 0; i < count; ++i) {
    const auto remaining = static_cast<std::uint64_t>(total_frames - i);
    const auto j = i + static_cast<int>(rng.uniform_below(remaining));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  plan.indices.assign(pool.begin(), pool.begin() + count);
  std::sort(plan.indices.begin(), plan.indices.end());
  return plan;
}

SamplingPlan make_plan(SamplingStrategy strategy, int total_frames, int requested, Seed seed) {
  switch (strategy) {
    case SamplingStrategy::FirstT: return plan_first(total_frames, requested);
    case SamplingStrategy::Uniform: return plan_uniform(total_frames, requested);
    case SamplingStrategy::UniformOffset: {
      check_counts(total_frames, requested);
      auto plan = plan_uniform_offset(total_frames, std::min(requested, total_frames), seed);
      plan.requested = requested;
      return plan;
    }
    case SamplingStrategy::Random: return plan_random(total_frames, requested, seed);
  }
  throw std::invalid_argument("unknown sampling strategy");
}

}  // namespace rvosh
