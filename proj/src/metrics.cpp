#include "rvosh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rvosh/error.hpp"

namespace rvosh {

double jaccard(const BinaryMask& pred, const BinaryMask& gt, Execution exec) {
  if (!pred.same_shape(gt)) throw DimensionMismatch("jaccard: mask shapes differ");
  const auto c = kernels::overlap(pred, gt, exec);
  if (c.united == 0) return 1.0;
  return static_cast<double>(c.intersection) / static_cast<double>(c.united);
}

BinaryMask mask_boundary(const BinaryMask& m, Execution exec) {
  return kernels::boundary(m, exec);
}

double boundary_f(const BinaryMask& pred, const BinaryMask& gt, double tolerance,
                  Execution exec) {
  if (!pred.same_shape(gt)) throw DimensionMismatch("boundary_f: mask shapes differ");
  if (tolerance < 0.0) throw std::invalid_argument("boundary_f: tolerance must be >= 0");
  const BinaryMask pred_edge = kernels::boundary(pred, exec);
  const BinaryMask gt_edge = kernels::boundary(gt, exec);
  const bool pred_empty = mask_area(pred_edge) == 0;
  const bool gt_empty = mask_area(gt_edge) == 0;
  if (pred_empty && gt_empty) return 1.0;
  if (pred_empty || gt_empty) return 0.0;

  const auto to_gt = kernels::squared_distance(gt_edge, exec);
  const auto to_pred = kernels::squared_distance(pred_edge, exec);
  const auto p = kernels::count_within(pred_edge, to_gt, tolerance, exec);
  const auto r = kernels::count_within(gt_edge, to_pred, tolerance, exec);
  const double precision = static_cast<double>(p.matched) / static_cast<double>(p.total);
  const double recall = static_cast<double>(r.matched) / static_cast<double>(r.total);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double default_boundary_tolerance(int height, int width) {
  const double diagonal = std::hypot(static_cast<double>(height), static_cast<double>(width));
  return std::max(1.0, std::round(0.008 * diagonal));
}

ExpressionScore score_expression(const MaskTrack& pred, const MaskTrack& gt, double tolerance,
                                 std::string expression_id, Execution exec) {
  if (gt.empty()) throw Error("score_expression: ground truth track is empty");
  const int frame_count = static_cast<int>(gt.size());
  if (!gt.is_full(frame_count)) {
    throw Error("score_expression: ground truth is not a full track");
  }
  for (int t = 0; t < frame_count; ++t) {
    if (!pred.contains(t)) {
      throw Error("score_expression: prediction missing frame " + std::to_string(t) +
                  " of video '" + gt.video_id() + "'");
    }
  }
  if (pred.size() != gt.size()) {
    throw Error("score_expression: prediction has frames beyond the ground truth");
  }

  ExpressionScore out;
  out.video_id = gt.video_id();
  out.expression_id = std::move(expression_id);
  out.frames.reserve(static_cast<std::size_t>(frame_count));
  double sum_j = 0.0;
  double sum_f = 0.0;
  for (int t = 0; t < frame_count; ++t) {
    const auto& p = pred.at(t);
    const auto& g = gt.at(t);
    FrameScore fs{t, jaccard(p, g, exec), boundary_f(p, g, tolerance, exec)};
    sum_j += fs.j;
    sum_f += fs.f;
    out.frames.push_back(fs);
  }
  out.mean_j = sum_j / frame_count;
  out.mean_f = sum_f / frame_count;
  out.jf = jf_mean(out.mean_j, out.mean_f);
  return out;
}

DatasetScore score_dataset(std::span<const ExpressionScore> scores) {
  if (scores.empty()) throw std::invalid_argument("score_dataset: no expressions to aggregate");
  double sum_j = 0.0;
  double sum_f = 0.0;
  for (const auto& s : scores) {
    sum_j += s.mean_j;
    sum_f += s.mean_f;
  }
  DatasetScore d;
  d.expression_count = scores.size();
  d.j = sum_j / static_cast<double>(scores.size());
  d.f = sum_f / static_cast<double>(scores.size());
  d.jf = jf_mean(d.j, d.f);
  return d;
}

}  // namespace rvosh
