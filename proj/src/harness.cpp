#include "rvosh/harness.hpp"

#include <memory>
#include <stdexcept>

#include <omp.h>

#include "rvosh/error.hpp"
#include "rvosh/external_backend.hpp"

namespace rvosh {
namespace {

struct BackendPair {
  std::unique_ptr<PredictorBackend> predictor_owner;
  std::unique_ptr<PropagatorBackend> propagator_owner;
  std::unique_ptr<ExternalBackend> external;
  PredictorBackend* predictor = nullptr;
  PropagatorBackend* propagator = nullptr;
};

BackendPair make_backends(const Dataset& dataset, const BackendOptions& opts) {
  BackendPair p;
  if (opts.kind == BackendKind::External) {
    p.external = std::make_unique<ExternalBackend>(
        ExternalBackendOptions{opts.command, std::chrono::milliseconds(10000), opts.request_timeout});
    p.external->start();
    p.predictor = p.external.get();
    p.propagator = p.external.get();
    return p;
  }
  auto predictor = std::make_unique<ToyPredictor>(opts.noise);
  for (std::size_t i = 0; i < dataset.expressions.size(); ++i) {
    const auto& task = dataset.expressions[i];
    if (dataset.annotations[i].empty()) continue;
    std::vector<int> ids(task.object_ids.begin(), task.object_ids.end());
    predictor->add_oracle(task.video_id, task.expression_id,
                          make_toy_oracle(task.video_id, dataset.annotations[i], ids));
  }
  p.predictor_owner = std::move(predictor);
  p.propagator_owner = std::make_unique<ToyPropagator>(opts.propagator);
  p.predictor = p.predictor_owner.get();
  p.propagator = p.propagator_owner.get();
  return p;
}

}  // namespace

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::External ? "external" : "toy";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "toy") return BackendKind::Toy;
  if (name == "external") return BackendKind::External;
  throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

std::size_t BatchResult::failures() const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += o.ok() ? 0 : 1;
  return n;
}

BatchResult run_batch(const Dataset& dataset, const PipelineConfig& cfg,
                      const BackendOptions& backend, int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  cfg.validate();
  backend.noise.validate();
  if (backend.kind == BackendKind::External && backend.command.empty()) {
    throw std::invalid_argument("external backend needs a command");
  }

  const int n = static_cast<int>(dataset.expressions.size());
  BatchResult result;
  result.outcomes.resize(dataset.expressions.size());
  if (n == 0) return result;

  // Toy backends are built once and shared. External workers hold a single
  // request stream each, so every OpenMP thread starts its own.
  const bool shared = backend.kind == BackendKind::Toy;
  const int threads = std::min(workers, n);
  std::vector<std::unique_ptr<BackendPair>> pool(static_cast<std::size_t>(shared ? 1 : threads));
  std::vector<std::string> start_errors(pool.size());
  if (shared) pool[0] = std::make_unique<BackendPair>(make_backends(dataset, backend));

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    const std::size_t slot = shared ? 0 : static_cast<std::size_t>(omp_get_thread_num());
    auto& out = result.outcomes[static_cast<std::size_t>(i)];
    const auto& task = dataset.expressions[static_cast<std::size_t>(i)];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (!pool[slot]) {
        try {
          pool[slot] = std::make_unique<BackendPair>(make_backends(dataset, backend));
        } catch (const std::exception& e) {
          start_errors[slot] = e.what();
          throw;
        }
      }
      const auto& video = dataset.video(task.video_id);
      out.sampled_frames = plan_for(video, task, cfg).indices;
      out.track = run_pipeline(video, task, cfg, *pool[slot]->predictor, *pool[slot]->propagator);
    } catch (const std::exception& e) {
      out.track.reset();
      out.error = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  bool any_started = false;
  for (const auto& p : pool) any_started = any_started || p != nullptr;
  if (!any_started) {
    for (const auto& e : start_errors) {
      if (!e.empty()) {
        result.environment_error = e;
        break;
      }
    }
  }
  return result;
}

double tolerance_for(const VideoSequence& video, std::optional<double> override_tolerance) {
  return override_tolerance ? *override_tolerance
                            : default_boundary_tolerance(video.height(), video.width());
}

std::vector<ExpressionScore> score_batch(const Dataset& dataset,
                                         const std::vector<MaskTrack>& predictions,
                                         std::optional<double> tolerance, int workers) {
  if (predictions.size() != dataset.expressions.size()) {
    throw std::invalid_argument("score_batch: one prediction per expression required");
  }
  const int n = static_cast<int>(predictions.size());
  std::vector<ExpressionScore> scores(predictions.size());
  std::vector<std::string> errors(predictions.size());
#pragma omp parallel for num_threads(std::max(1, std::min(workers, n))) schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto& task = dataset.expressions[k];
    try {
      if (!task.ground_truth) throw Error("expression has no ground truth");
      const auto& video = dataset.video(task.video_id);
      scores[k] = score_expression(predictions[k], *task.ground_truth,
                                   tolerance_for(video, tolerance), task.expression_id,
                                   Execution::Serial);
    } catch (const std::exception& e) {
      errors[k] = task.video_id + "/" + task.expression_id + ": " + e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw Error(e);
  }
  return scores;
}

}  // namespace rvosh
