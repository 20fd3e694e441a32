#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rvosh/error.hpp"
#include "rvosh/pipeline.hpp"
#include "rvosh/synth.hpp"
#include "rvosh/toy_backends.hpp"
#include "support.hpp"

using namespace rvosh;
using V = std::vector<int>;

namespace {

VideoSequence blank_video(int frames, int h = 4, int w = 5) {
  auto img = std::make_shared<const RgbImage>(h, w);
  return VideoSequence("v", h, w, std::vector<FrameRef>(static_cast<std::size_t>(frames), {"", img}));
}

/// Mask with a single pixel whose position encodes `tag`.
BinaryMask tagged(int tag, int h = 4, int w = 5) {
  BinaryMask m(h, w);
  m.set(tag / w % h, tag % w);
  return m;
}

class FakePredictor : public PredictorBackend {
 public:
  MaskTrack predict(const PredictorRequest& req) override {
    ++calls;
    last_indices = req.indices;
    MaskTrack t(req.video.id());
    for (int i : req.indices) {
      if (i == skip) continue;
      t.set(i, tagged(i, req.video.height(), req.video.width() + extra_width));
    }
    return t;
  }
  bool shareable() const override { return true; }

  int calls = 0;
  int skip = -1;
  int extra_width = 0;
  V last_indices;
};

class FakePropagator : public PropagatorBackend {
 public:
  std::vector<BinaryMask> propagate(const PropagateRequest& req) override {
    segments.push_back(req.segment);
    prompt_frames = req.prompts.frames();
    std::vector<BinaryMask> out;
    for (int t : req.segment.targets) out.push_back(tagged(100 + t));
    if (short_answer && !out.empty()) out.pop_back();
    return out;
  }
  bool shareable() const override { return true; }

  std::vector<PropagationSegment> segments;
  V prompt_frames;
  bool short_answer = false;
};

MaskTrack partial(V frames) {
  MaskTrack t("v");
  for (int f : frames) t.set(f, tagged(f));
  return t;
}

ExpressionTask task() { return {"v", "e", "the thing", {1}, std::nullopt}; }

PipelineConfig consistent(SamplingStrategy s, int frames, PromptPolicy p = PromptPolicy::all()) {
  PipelineConfig cfg;
  cfg.mode = PipelineMode::Consistent;
  cfg.sampling = s;
  cfg.frames = frames;
  cfg.prompt_policy = p;
  return cfg;
}

}  // namespace

TEST(PromptPolicy, ParseAndPrint) {
  EXPECT_TRUE(PromptPolicy::parse("all").is_all());
  EXPECT_EQ(PromptPolicy::parse("first:3").k(), 3);
  EXPECT_EQ(PromptPolicy::first(2).to_string(), "first:2");
  for (const char* bad : {"first:", "first:0", "first:x", "some", "first:2x"}) {
    EXPECT_THROW(PromptPolicy::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(PipelineConfig, FirstKMustNotExceedFrames) {
  auto cfg = consistent(SamplingStrategy::Uniform, 3, PromptPolicy::first(4));
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.prompt_policy = PromptPolicy::first(3);
  EXPECT_NO_THROW(cfg.validate());
  cfg.frames = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SelectPrompts, Examples) {
  EXPECT_EQ(select_prompts(partial({0, 3, 6}), PromptPolicy::all()).frames(), (V{0, 3, 6}));
  EXPECT_EQ(select_prompts(partial({0, 3, 6}), PromptPolicy::first(1)).frames(), (V{0}));
  EXPECT_EQ(select_prompts(partial({2, 5}), PromptPolicy::first(2)).frames(), (V{2, 5}));
  EXPECT_THROW(select_prompts(partial({2, 5}), PromptPolicy::first(3)), Error);
  EXPECT_THROW(select_prompts(MaskTrack("v"), PromptPolicy::all()), Error);
}

TEST(Partition, Examples) {
  using S = PropagationSegment;
  const V a{0, 4, 8};
  EXPECT_EQ(partition_propagation(a, 10),
            (std::vector<S>{{0, Direction::Forward, {1, 2, 3}},
                            {4, Direction::Forward, {5, 6, 7}},
                            {8, Direction::Forward, {9}}}));
  const V b{3};
  EXPECT_EQ(partition_propagation(b, 6),
            (std::vector<S>{{3, Direction::Backward, {2, 1, 0}}, {3, Direction::Forward, {4, 5}}}));
  const V c{0};
  EXPECT_TRUE(partition_propagation(c, 1).empty());
  EXPECT_THROW(partition_propagation(V{}, 3), std::invalid_argument);
  EXPECT_THROW(partition_propagation(V{3, 1}, 5), std::invalid_argument);
  EXPECT_THROW(partition_propagation(V{5}, 5), std::invalid_argument);
}

TEST(Partition, CoversEveryNonPromptFrameOnce) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    std::set<int> ps;
    const int k = std::uniform_int_distribution<int>(1, n)(rng);
    while (static_cast<int>(ps.size()) < k) ps.insert(std::uniform_int_distribution<int>(0, n - 1)(rng));
    const V prompts(ps.begin(), ps.end());
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const auto& s : partition_propagation(prompts, n)) {
      ASSERT_TRUE(ps.count(s.prompt_frame));
      for (std::size_t i = 0; i < s.targets.size(); ++i) {
        const int t = s.targets[i];
        ++seen[static_cast<std::size_t>(t)];
        if (s.direction == Direction::Forward) {
          EXPECT_GT(t, s.prompt_frame);
          EXPECT_EQ(t, s.prompt_frame + 1 + static_cast<int>(i));
        } else {
          EXPECT_LT(t, s.prompt_frame);
          EXPECT_EQ(t, s.prompt_frame - 1 - static_cast<int>(i));
        }
      }
    }
    for (int f = 0; f < n; ++f) EXPECT_EQ(seen[static_cast<std::size_t>(f)], ps.count(f) ? 0 : 1);
  }
}

TEST(RunConsistent, SingleFrameSkipsPropagation) {
  const auto video = blank_video(1);
  FakePredictor pred;
  FakePropagator prop;
  const auto out = run_consistent(video, task(), consistent(SamplingStrategy::Uniform, 1), pred, prop);
  EXPECT_EQ(out.frames(), V{0});
  EXPECT_EQ(out.at(0), tagged(0));
  EXPECT_TRUE(prop.segments.empty());
}

TEST(RunConsistent, PinsPromptsAndPropagatesTheRest) {
  const auto video = blank_video(10);
  FakePredictor pred;
  FakePropagator prop;
  const auto out = run_consistent(video, task(), consistent(SamplingStrategy::Uniform, 5), pred, prop);
  EXPECT_EQ(pred.calls, 1);
  EXPECT_EQ(pred.last_indices, (V{0, 2, 4, 6, 9}));
  ASSERT_TRUE(out.is_full(10));
  for (int f : pred.last_indices) EXPECT_EQ(out.at(f), tagged(f));
  std::multiset<int> propagated;
  for (const auto& s : prop.segments) propagated.insert(s.targets.begin(), s.targets.end());
  EXPECT_EQ(propagated, (std::multiset<int>{1, 3, 5, 7, 8}));
  for (int f : propagated) EXPECT_EQ(out.at(f), tagged(100 + f));
  EXPECT_EQ(prop.prompt_frames, (V{0, 2, 4, 6, 9}));
}

TEST(RunConsistent, FirstKPromptsOnlyPinK) {
  const auto video = blank_video(10);
  FakePredictor pred;
  FakePropagator prop;
  const auto out = run_consistent(
      video, task(), consistent(SamplingStrategy::Uniform, 5, PromptPolicy::first(1)), pred, prop);
  EXPECT_EQ(prop.prompt_frames, V{0});
  EXPECT_EQ(out.at(0), tagged(0));
  for (int f = 1; f < 10; ++f) EXPECT_EQ(out.at(f), tagged(100 + f));
}

TEST(RunConsistent, PolicyIrrelevantForSingleFrame) {
  const auto video = blank_video(6);
  FakePredictor p1, p2;
  FakePropagator q1, q2;
  const auto a = run_consistent(video, task(), consistent(SamplingStrategy::Uniform, 1), p1, q1);
  const auto b = run_consistent(
      video, task(), consistent(SamplingStrategy::Uniform, 1, PromptPolicy::first(1)), p2, q2);
  EXPECT_EQ(a, b);
}

TEST(RunConsistent, FirstKClampedOnShortVideo) {
  const auto video = blank_video(2);
  FakePredictor pred;
  FakePropagator prop;
  const auto out = run_consistent(
      video, task(), consistent(SamplingStrategy::Uniform, 5, PromptPolicy::first(4)), pred, prop);
  EXPECT_EQ(prop.segments.size(), 0u);
  EXPECT_EQ(out.at(1), tagged(1));
}

TEST(RunConsistent, RejectsBadBackendOutput) {
  const auto video = blank_video(10);
  const auto cfg = consistent(SamplingStrategy::Uniform, 5);
  {
    FakePredictor pred;
    pred.skip = 4;
    FakePropagator prop;
    EXPECT_THROW(run_consistent(video, task(), cfg, pred, prop), BackendError);
  }
  {
    FakePredictor pred;
    pred.extra_width = 1;
    FakePropagator prop;
    EXPECT_THROW(run_consistent(video, task(), cfg, pred, prop), BackendError);
  }
  {
    FakePredictor pred;
    FakePropagator prop;
    prop.short_answer = true;
    EXPECT_THROW(run_consistent(video, task(), cfg, pred, prop), BackendError);
  }
  PipelineConfig legacy = cfg;
  legacy.mode = PipelineMode::Legacy;
  FakePredictor pred;
  FakePropagator prop;
  EXPECT_THROW(run_consistent(video, task(), legacy, pred, prop), std::invalid_argument);
}

TEST(RunLegacy, StreamsFromFirstPredictionOnly) {
  const auto video = blank_video(8);
  PipelineConfig cfg;
  cfg.mode = PipelineMode::Legacy;
  cfg.sampling = SamplingStrategy::FirstT;
  cfg.frames = 5;
  FakePredictor pred;
  FakePropagator prop;
  const auto out = run_legacy(video, task(), cfg, pred, prop);
  EXPECT_EQ(pred.last_indices, (V{0, 1, 2, 3, 4}));
  ASSERT_EQ(prop.segments.size(), 1u);
  EXPECT_EQ(prop.segments[0].targets, (V{1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(out.at(0), tagged(0));
  // Sampled frames 1..4 are re-predicted by propagation, not pinned.
  for (int f = 1; f < 8; ++f) EXPECT_EQ(out.at(f), tagged(100 + f));

  const auto one = blank_video(1);
  cfg.frames = 1;
  FakePropagator none;
  EXPECT_EQ(run_legacy(one, task(), cfg, pred, none).at(0), tagged(0));
  EXPECT_TRUE(none.segments.empty());
}

TEST(ToyPipeline, NoiselessStaticSceneIsExact) {
  support::TempDir dir("pipeline");
  const auto ds = support::load_preset("static", dir.path());
  for (auto mode : {PipelineMode::Consistent, PipelineMode::Legacy}) {
    PipelineConfig cfg;
    cfg.mode = mode;
    const auto result = run_batch(ds, cfg, BackendOptions{}, 1);
    for (std::size_t i = 0; i < ds.expressions.size(); ++i) {
      ASSERT_TRUE(result.outcomes[i].ok()) << result.outcomes[i].error;
      EXPECT_EQ(*result.outcomes[i].track, *ds.expressions[i].ground_truth);
    }
  }
}

TEST(ToyPipeline, LateAppearanceFavoursUniformSampling) {
  support::TempDir dir("pipeline");
  const auto ds = support::load_preset("late-appearance", dir.path());
  auto cfg = consistent(SamplingStrategy::Uniform, 5);
  const double uniform = support::run_and_score(ds, cfg, BackendOptions{}).jf;
  cfg.sampling = SamplingStrategy::FirstT;
  const double first = support::run_and_score(ds, cfg, BackendOptions{}).jf;
  cfg.mode = PipelineMode::Legacy;
  const double legacy = support::run_and_score(ds, cfg, BackendOptions{}).jf;
  EXPECT_DOUBLE_EQ(uniform, 1.0);
  EXPECT_GT(uniform, first);
  EXPECT_GT(uniform, legacy);
}

TEST(ToyPipeline, ConsistentModeScoresHighOnEveryPreset) {
  for (const auto& name : preset_names()) {
    support::TempDir dir("pipeline");
    const auto ds = support::load_preset(name, dir.path());
    EXPECT_GE(support::run_and_score(ds, PipelineConfig{}, BackendOptions{}).jf, 0.95) << name;
  }
}

TEST(ToyPipeline, DeterministicAcrossRunsAndWorkerCounts) {
  support::TempDir dir("pipeline");
  const auto ds = support::load_preset("two-object-conflict", dir.path());
  auto cfg = consistent(SamplingStrategy::Random, 6);
  cfg.seed = Seed{99};
  const auto backend = support::noisy_toy();
  const auto a = run_batch(ds, cfg, backend, 1);
  const auto b = run_batch(ds, cfg, backend, 3);
  ASSERT_EQ(a.failures(), 0u);
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    EXPECT_EQ(*a.outcomes[i].track, *b.outcomes[i].track);
    EXPECT_EQ(a.outcomes[i].sampled_frames, b.outcomes[i].sampled_frames);
  }
}
