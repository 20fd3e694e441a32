#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rvosh/backend.hpp"
#include "rvosh/random.hpp"

namespace rvosh {

/// Corruption applied by the toy predictor to otherwise perfect masks.
struct ToyNoiseConfig {
  /// Per-frame chance of answering with the largest other object instead.
  double swap_probability = 0.0;
  /// Chebyshev dilation (> 0) or erosion (< 0) radius applied afterwards.
  int dilation_radius = 0;
  Seed seed;

  void validate() const;
};

/// Ground truth the toy predictor answers from: the referred object(s) and
/// every other labelled object in the scene (candidate distractors).
struct ToyOracle {
  MaskTrack target;
  std::map<int, MaskTrack> others;
};

/// Builds an oracle from per-frame label maps: target = union of `object_ids`,
/// every other non-zero label becomes a distractor.
ToyOracle make_toy_oracle(const std::string& video_id, const std::vector<LabelMap>& labels,
                          const std::vector<int>& object_ids);

/// Stand-in for the language model stage. Deterministic per (seed, frame).
MaskTrack toy_predict(const PredictorRequest& request, const ToyOracle& oracle,
                      const ToyNoiseConfig& noise);

class ToyPredictor final : public PredictorBackend {
 public:
  explicit ToyPredictor(ToyNoiseConfig noise = {});

  void add_oracle(const std::string& video_id, const std::string& expression_id,
                  ToyOracle oracle);

  MaskTrack predict(const PredictorRequest& request) override;
  bool shareable() const override { return true; }

 private:
  ToyNoiseConfig noise_;
  std::map<std::pair<std::string, std::string>, ToyOracle> oracles_;
};

/// Prompt entries are permanent; tracked entries form a FIFO of at most
/// `capacity` masks.
class MemoryBank {
 public:
  struct Entry {
    int frame;
    BinaryMask mask;
    bool prompt;
  };

  explicit MemoryBank(int capacity);

  void add_prompt(int frame, BinaryMask mask);
  void push_tracked(int frame, BinaryMask mask);

  /// Entry closest in time to `frame`; ties prefer prompts, then the lower
  /// frame index. Throws Error if the bank is empty.
  const Entry& nearest(int frame) const;

  int capacity() const noexcept { return capacity_; }
  std::size_t prompt_count() const noexcept { return prompts_.size(); }
  std::size_t tracked_count() const noexcept { return tracked_.size(); }
  const std::deque<Entry>& tracked() const noexcept { return tracked_; }

 private:
  int capacity_;
  std::vector<Entry> prompts_;
  std::deque<Entry> tracked_;
};

struct ToyPropagatorParams {
  double color_tolerance = 16.0;
  int memory_capacity = 4;
  int search_radius = 8;
};

/// Colour-matching tracker. For each target frame: pick the nearest memory
/// entry, take the mean colour under its mask, keep candidate pixels within
/// tolerance of it, and return the 4-connected candidate components touching
/// the reference mask dilated by search_radius. Each result enters memory.
std::vector<BinaryMask> toy_propagate(const PropagateRequest& request, MemoryBank& bank,
                                      const ToyPropagatorParams& params);

class ToyPropagator final : public PropagatorBackend {
 public:
  explicit ToyPropagator(ToyPropagatorParams params = {});

  /// Fresh memory bank per segment, seeded with every prompt of the request.
  std::vector<BinaryMask> propagate(const PropagateRequest& request) override;
  bool shareable() const override { return true; }

 private:
  ToyPropagatorParams params_;
};

}  // namespace rvosh
