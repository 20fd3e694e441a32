#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "rvosh/manifest.hpp"
#include "rvosh/metrics.hpp"
#include "rvosh/pipeline.hpp"
#include "rvosh/toy_backends.hpp"

namespace rvosh {

enum class BackendKind { Toy, External };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view name);

struct BackendOptions {
  BackendKind kind = BackendKind::Toy;
  /// Shell command for BackendKind::External.
  std::string command;
  ToyNoiseConfig noise;
  ToyPropagatorParams propagator;
  std::chrono::milliseconds request_timeout{60000};
};

struct ExpressionOutcome {
  std::optional<MaskTrack> track;
  /// Empty on success.
  std::string error;
  std::vector<int> sampled_frames;
  double seconds = 0.0;

  bool ok() const noexcept { return track.has_value(); }
};

/// Outcomes are parallel to dataset.expressions.
struct BatchResult {
  std::vector<ExpressionOutcome> outcomes;
  /// Set when no backend could be started at all.
  std::string environment_error;

  std::size_t failures() const;
};

/// Runs every expression, up to `workers` at a time. A failing expression
/// records its error and does not affect the others. Shareable backends are
/// used by all workers; others get one instance per worker.
BatchResult run_batch(const Dataset& dataset, const PipelineConfig& cfg,
                      const BackendOptions& backend, int workers);

/// Boundary tolerance used for a video: the override or the diagonal default.
double tolerance_for(const VideoSequence& video, std::optional<double> override_tolerance);

/// Scores each expression with ground truth. Throws Error when an expression
/// has no ground truth or a prediction is missing/incomplete.
std::vector<ExpressionScore> score_batch(const Dataset& dataset,
                                         const std::vector<MaskTrack>& predictions,
                                         std::optional<double> tolerance, int workers);

}  // namespace rvosh
