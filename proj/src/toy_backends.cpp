#include "rvosh/toy_backends.hpp"

#include <cstdlib>
#include <stdexcept>

#include "rvosh/error.hpp"
#include "rvosh/kernels.hpp"

namespace rvosh {

void ToyNoiseConfig::validate() const {
  if (!(swap_probability >= 0.0 && swap_probability <= 1.0)) {
    throw std::invalid_argument("swap probability must lie in [0, 1]");
  }
}

ToyOracle make_toy_oracle(const std::string& video_id, const std::vector<LabelMap>& labels,
                          const std::vector<int>& object_ids) {
  ToyOracle oracle{MaskTrack(video_id), {}};
  std::array<bool, 256> is_target{};
  for (int id : object_ids) {
    if (id > 0 && id < 256) is_target[static_cast<std::size_t>(id)] = true;
  }
  std::array<bool, 256> present{};
  for (const auto& lm : labels) {
    for (auto l : lm.labels()) present[l] = true;
  }
  for (std::size_t t = 0; t < labels.size(); ++t) {
    oracle.target.set(static_cast<int>(t), labels[t].select(object_ids));
  }
  for (int l = 1; l < 256; ++l) {
    if (!present[static_cast<std::size_t>(l)] || is_target[static_cast<std::size_t>(l)]) continue;
    MaskTrack track(video_id);
    const int one[] = {l};
    for (std::size_t t = 0; t < labels.size(); ++t) {
      track.set(static_cast<int>(t), labels[t].select(one));
    }
    oracle.others.emplace(l, std::move(track));
  }
  return oracle;
}

MaskTrack toy_predict(const PredictorRequest& request, const ToyOracle& oracle,
                      const ToyNoiseConfig& noise) {
  noise.validate();
  const Seed swap_seed =
      derive_seed(noise.seed, request.video.id(), request.expression_id, "toy-swap");
  const CounterRng rng(swap_seed);

  MaskTrack out(request.video.id());
  for (int frame : request.indices) {
    if (!oracle.target.contains(frame)) {
      throw BackendError("toy predictor: no ground truth for frame " + std::to_string(frame));
    }
    BinaryMask mask = oracle.target.at(frame);
    if (rng.uniform01_at(static_cast<std::uint64_t>(frame)) < noise.swap_probability) {
      // Largest other object on this frame; lower label wins ties.
      const BinaryMask* best = nullptr;
      std::size_t best_area = 0;
      for (const auto& [label, track] : oracle.others) {
        if (!track.contains(frame)) continue;
        const auto area = mask_area(track.at(frame));
        if (area > best_area) {
          best_area = area;
          best = &track.at(frame);
        }
      }
      mask = best ? *best : BinaryMask(mask.height(), mask.width());
    }
    if (noise.dilation_radius != 0) {
      mask = kernels::morph(mask, noise.dilation_radius, Execution::Parallel);
    }
    out.set(frame, std::move(mask));
  }
  return out;
}

ToyPredictor::ToyPredictor(ToyNoiseConfig noise) : noise_(noise) { noise_.validate(); }

void ToyPredictor::add_oracle(const std::string& video_id, const std::string& expression_id,
                              ToyOracle oracle) {
  oracles_.insert_or_assign({video_id, expression_id}, std::move(oracle));
}

MaskTrack ToyPredictor::predict(const PredictorRequest& request) {
  auto it = oracles_.find({request.video.id(), request.expression_id});
  if (it == oracles_.end()) {
    throw BackendError("toy predictor: no oracle for expression '" + request.expression_id +
                       "' of video '" + request.video.id() + "'");
  }
  return toy_predict(request, it->second, noise_);
}

MemoryBank::MemoryBank(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw std::invalid_argument("memory capacity must be >= 0");
}

void MemoryBank::add_prompt(int frame, BinaryMask mask) {
  prompts_.push_back({frame, std::move(mask), true});
}

void MemoryBank::push_tracked(int frame, BinaryMask mask) {
  if (capacity_ == 0) return;
  tracked_.push_back({frame, std::move(mask), false});
  while (static_cast<int>(tracked_.size()) > capacity_) tracked_.pop_front();
}

const MemoryBank::Entry& MemoryBank::nearest(int frame) const {
  const Entry* best = nullptr;
  auto better = [&](const Entry& e) {
    if (!best) return true;
    const int de = std::abs(frame - e.frame);
    const int db = std::abs(frame - best->frame);
    if (de != db) return de < db;
    if (e.prompt != best->prompt) return e.prompt;
    return e.frame < best->frame;
  };
  for (const auto& e : prompts_) {
    if (better(e)) best = &e;
  }
  for (const auto& e : tracked_) {
    if (better(e)) best = &e;
  }
  if (!best) throw Error("memory bank is empty");
  return *best;
}

std::vector<BinaryMask> toy_propagate(const PropagateRequest& request, MemoryBank& bank,
                                      const ToyPropagatorParams& params) {
  const auto& video = request.video;
  std::vector<BinaryMask> out;
  out.reserve(request.segment.targets.size());
  for (int t : request.segment.targets) {
    const auto& ref = bank.nearest(t);
    std::array<double, 3> color{0.0, 0.0, 0.0};
    const std::size_t area = mask_area(ref.mask);
    if (area > 0) {
      const RgbImage& ref_pixels = video.pixels(ref.frame);
      std::array<std::uint64_t, 3> sum{};
      for (int y = 0; y < ref.mask.height(); ++y) {
        for (int x = 0; x < ref.mask.width(); ++x) {
          if (!ref.mask.at(y, x)) continue;
          const Rgb p = ref_pixels.at(y, x);
          for (std::size_t c = 0; c < 3; ++c) sum[c] += p[c];
        }
      }
      for (std::size_t c = 0; c < 3; ++c) {
        color[c] = static_cast<double>(sum[c]) / static_cast<double>(area);
      }
    }
    const BinaryMask candidates = kernels::color_candidates(
        video.pixels(t), color, params.color_tolerance, Execution::Parallel);
    const BinaryMask reach = kernels::morph(ref.mask, params.search_radius, Execution::Parallel);
    BinaryMask mask = kernels::grow_components(candidates, reach);
    bank.push_tracked(t, mask);
    out.push_back(std::move(mask));
  }
  return out;
}

ToyPropagator::ToyPropagator(ToyPropagatorParams params) : params_(params) {
  if (params_.color_tolerance < 0.0) throw std::invalid_argument("color tolerance must be >= 0");
  if (params_.search_radius < 0) throw std::invalid_argument("search radius must be >= 0");
  if (params_.memory_capacity < 0) throw std::invalid_argument("memory capacity must be >= 0");
}

std::vector<BinaryMask> ToyPropagator::propagate(const PropagateRequest& request) {
  MemoryBank bank(params_.memory_capacity);
  for (const auto& [frame, mask] : request.prompts.entries) bank.add_prompt(frame, mask);
  return toy_propagate(request, bank, params_);
}

}  // namespace rvosh
