#pragma once

#include <span>
#include <string>
#include <vector>

#include "rvosh/kernels.hpp"
#include "rvosh/mask.hpp"
#include "rvosh/video.hpp"

namespace rvosh {

struct FrameScore {
  int frame = 0;
  double j = 0.0;
  double f = 0.0;
};

struct ExpressionScore {
  std::string video_id;
  std::string expression_id;
  double mean_j = 0.0;
  double mean_f = 0.0;
  double jf = 0.0;
  std::vector<FrameScore> frames;
};

struct DatasetScore {
  std::size_t expression_count = 0;
  double j = 0.0;
  double f = 0.0;
  double jf = 0.0;
};

/// Region similarity |pred ∩ gt| / |pred ∪ gt|. Both empty scores 1.
/// Throws DimensionMismatch.
double jaccard(const BinaryMask& pred, const BinaryMask& gt,
               Execution exec = Execution::Parallel);

/// Set pixels with at least one 4-neighbour that is unset or off-image.
BinaryMask mask_boundary(const BinaryMask& m, Execution exec = Execution::Parallel);

/// Boundary F-measure. A boundary pixel counts as matched when some boundary
/// pixel of the other mask lies within Euclidean distance `tolerance`.
/// Both boundaries empty scores 1; exactly one empty scores 0.
double boundary_f(const BinaryMask& pred, const BinaryMask& gt, double tolerance,
                  Execution exec = Execution::Parallel);

/// max(1, round(0.008 * diagonal)), the usual DAVIS toolkit default.
double default_boundary_tolerance(int height, int width);

/// Headline score: the arithmetic mean, not the geometric one.
constexpr double jf_mean(double j, double f) { return (j + f) / 2.0; }

/// Scores every frame of two full tracks. Throws Error on a missing frame.
ExpressionScore score_expression(const MaskTrack& pred, const MaskTrack& gt, double tolerance,
                                 std::string expression_id = {},
                                 Execution exec = Execution::Parallel);

/// Unweighted mean over expressions, summed in input order. Throws
/// std::invalid_argument on an empty list.
DatasetScore score_dataset(std::span<const ExpressionScore> scores);

}  // namespace rvosh
