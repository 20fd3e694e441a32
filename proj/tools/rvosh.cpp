// rvosh: synthesize scenes, print sampling plans, run the two-stage
// pipeline, evaluate predictions and sweep configuration grids.
//
// Exit codes: 0 success, 1 some expressions failed, 2 usage error,
// 3 environment or backend failure (including every expression failing).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "rvosh/error.hpp"
#include "rvosh/harness.hpp"
#include "rvosh/manifest.hpp"
#include "rvosh/mevis.hpp"
#include "rvosh/png_io.hpp"
#include "rvosh/report.hpp"
#include "rvosh/sampling.hpp"
#include "rvosh/synth.hpp"

namespace fs = std::filesystem;
using namespace rvosh;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kUsage = 2;
constexpr int kEnvironment = 3;

/// Raised for bad flag values that CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PipelineFlags {
  std::string mode = "consistent";
  std::string sampling = "uniform";
  int frames = 5;
  std::string prompt_policy = "all";
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
};

struct BackendFlags {
  std::string backend = "toy";
  std::string backend_cmd;
  int workers = 1;
  double toy_swap = 0.0;
  int toy_dilation = 0;
  std::optional<std::uint64_t> toy_seed;
  double timeout_s = 60.0;
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& f) {
  app->add_option("--mode", f.mode, "legacy | consistent")->capture_default_str();
  app->add_option("--sampling", f.sampling, "first | uniform | uniform-offset | random")
      ->capture_default_str();
  app->add_option("--frames", f.frames, "frames T given to the predictor")->capture_default_str();
  app->add_option("--prompt-policy", f.prompt_policy, "all | first:K")->capture_default_str();
  app->add_option("--tolerance", f.tolerance, "boundary tolerance in pixels (default: diagonal rule)");
  app->add_option("--seed", f.seed, "root seed")->capture_default_str();
}

void add_backend_flags(CLI::App* app, BackendFlags& f) {
  app->add_option("--backend", f.backend, "toy | external")->capture_default_str();
  app->add_option("--backend-cmd", f.backend_cmd, "worker command for --backend external");
  app->add_option("--workers", f.workers, "expressions run concurrently")
      ->envname("RVOSH_WORKERS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--toy-swap", f.toy_swap, "toy predictor swap probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app->add_option("--toy-dilation", f.toy_dilation, "toy predictor dilation radius (< 0 erodes)")
      ->capture_default_str();
  app->add_option("--toy-seed", f.toy_seed, "toy noise seed (default: --seed)");
  app->add_option("--timeout", f.timeout_s, "seconds to wait for each worker response")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

PipelineConfig make_config(const PipelineFlags& f) {
  try {
    PipelineConfig cfg;
    cfg.mode = parse_pipeline_mode(f.mode);
    cfg.sampling = parse_sampling_strategy(f.sampling);
    cfg.frames = f.frames;
    cfg.prompt_policy = PromptPolicy::parse(f.prompt_policy);
    cfg.boundary_tolerance = f.tolerance;
    cfg.seed = Seed{f.seed};
    cfg.validate();
    return cfg;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

BackendOptions make_backend(const BackendFlags& f, Seed seed) {
  BackendOptions b;
  try {
    b.kind = parse_backend_kind(f.backend);
    b.noise.swap_probability = f.toy_swap;
    b.noise.dilation_radius = f.toy_dilation;
    b.noise.seed = f.toy_seed ? Seed{*f.toy_seed} : seed;
    b.noise.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (b.kind == BackendKind::External && f.backend_cmd.empty()) {
    throw UsageError("--backend external requires --backend-cmd");
  }
  b.command = f.backend_cmd;
  b.request_timeout = std::chrono::milliseconds(static_cast<long long>(f.timeout_s * 1000.0));
  return b;
}

Dataset load_for(const fs::path& manifest, BackendKind kind) {
  Dataset ds = load_manifest(manifest);
  // The toy propagator matches colours, so it needs the pixels in memory.
  if (kind == BackendKind::Toy) load_pixels(ds);
  return ds;
}

fs::path mask_dir(const fs::path& root, const ExpressionTask& task) {
  return root / "masks" / task.video_id / task.expression_id;
}

nlohmann::ordered_json config_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(cfg.mode);
  j["sampling"] = to_string(cfg.sampling);
  j["frames"] = cfg.frames;
  j["prompt_policy"] = cfg.prompt_policy.to_string();
  j["boundary_tolerance"] = cfg.boundary_tolerance ? nlohmann::ordered_json(*cfg.boundary_tolerance)
                                                   : nlohmann::ordered_json(nullptr);
  j["seed"] = cfg.seed.value;
  return j;
}

bool same_dir(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  return fs::exists(a) && fs::exists(b) && fs::equivalent(a, b, ec);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- synth ------------------------------------------------------------------

int cmd_synth(const std::string& source, const fs::path& out) {
  SyntheticDatasetSpec spec;
  if (fs::path(source).extension() == ".json") {
    spec = parse_synthetic_spec(read_text(source));
  } else {
    try {
      spec = preset(source);
    } catch (const std::invalid_argument& e) {
      std::string names;
      for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
      throw UsageError(std::string(e.what()) + " (presets: " + names + ")");
    }
  }
  const auto manifest = write_synthetic_dataset(spec, out);
  std::cout << fmt::format("wrote {} video(s), {} expression(s) to {}\n", manifest.videos.size(),
                           manifest.expressions.size(), (out / "manifest.json").string());
  return kOk;
}

// --- plan -------------------------------------------------------------------

int cmd_plan(const std::string& strategy, int frames_i, int frames_t, std::uint64_t seed) {
  SamplingStrategy s;
  try {
    s = parse_sampling_strategy(strategy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto plan = make_plan(s, frames_i, frames_t, Seed{seed});
  std::cout << fmt::format("{}\n", fmt::join(plan.indices, " "));
  return kOk;
}

// --- run --------------------------------------------------------------------

int cmd_run(const fs::path& manifest, const fs::path& out, const PipelineFlags& pf,
            const BackendFlags& bf) {
  const PipelineConfig cfg = make_config(pf);
  const BackendOptions backend = make_backend(bf, cfg.seed);
  if (same_dir(out, manifest.has_parent_path() ? manifest.parent_path() : fs::path("."))) {
    throw UsageError("output directory must differ from the manifest directory");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const Dataset ds = load_for(manifest, backend.kind);
  const BatchResult result = run_batch(ds, cfg, backend, bf.workers);

  // Single collector: every file is written here, after the workers finish.
  nlohmann::ordered_json meta;
  meta["manifest"] = fs::absolute(manifest).lexically_normal().string();
  meta["dataset"] = ds.manifest.name;
  meta["config"] = config_json(cfg);
  auto& jb = meta["backend"];
  jb["kind"] = to_string(backend.kind);
  if (backend.kind == BackendKind::External) {
    jb["command"] = backend.command;
  } else {
    jb["swap_probability"] = backend.noise.swap_probability;
    jb["dilation_radius"] = backend.noise.dilation_radius;
    jb["noise_seed"] = backend.noise.seed.value;
    jb["color_tolerance"] = backend.propagator.color_tolerance;
    jb["memory_capacity"] = backend.propagator.memory_capacity;
    jb["search_radius"] = backend.propagator.search_radius;
  }
  meta["workers"] = bf.workers;
  auto& rows = meta["expressions"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ds.expressions.size(); ++i) {
    const auto& task = ds.expressions[i];
    const auto& o = result.outcomes[i];
    nlohmann::ordered_json row;
    row["video"] = task.video_id;
    row["expression"] = task.expression_id;
    row["status"] = o.ok() ? "ok" : "failed";
    if (!o.ok()) row["error"] = o.error;
    row["sampled_frames"] = o.sampled_frames;
    row["sampling_seed"] = derive_seed(cfg.seed, task.video_id, task.expression_id, "sampling").value;
    row["seconds"] = o.seconds;
    rows.push_back(std::move(row));

    const auto dir = mask_dir(out, task);
    if (o.ok()) {
      fs::remove_all(dir);
      write_masks(*o.track, dir);
    } else {
      std::cerr << fmt::format("error: {}/{}: {}\n", task.video_id, task.expression_id, o.error);
    }
  }
  meta["failures"] = result.failures();
  meta["seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(out);
  std::ofstream(out / "run.json", std::ios::binary) << meta.dump(2) << "\n";

  const std::size_t n = ds.expressions.size();
  std::cout << fmt::format("{} of {} expression(s) completed; masks in {}\n", n - result.failures(),
                           n, (out / "masks").string());
  if (!result.environment_error.empty()) {
    std::cerr << "error: backend unavailable: " << result.environment_error << "\n";
    return kEnvironment;
  }
  if (n > 0 && result.failures() == n) return kEnvironment;
  return result.failures() > 0 ? kPartial : kOk;
}

// --- eval -------------------------------------------------------------------

std::vector<ReportFormat> report_formats(const std::string& format) {
  if (format == "both") return {ReportFormat::Structured, ReportFormat::Csv};
  try {
    return {parse_report_format(format)};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void print_scores(const Report& report) {
  std::cout << fmt::format("{:<32} J&F J F\n", "expression");
  for (const auto& e : report.expressions) {
    std::cout << fmt::format("{:<32} {} {} {}\n", e.video_id + "/" + e.expression_id,
                             format_score(e.jf), format_score(e.mean_j), format_score(e.mean_f));
  }
  std::cout << fmt::format("{:<32} {}\n",
                           fmt::format("{} ({} expr)", report.dataset, report.total.expression_count),
                           format_row(report.total));
}

int cmd_eval(const fs::path& pred, const fs::path& manifest, std::optional<double> tolerance,
             const std::string& format, int workers) {
  const auto formats = report_formats(format);
  if (tolerance && *tolerance < 0) throw UsageError("--tolerance must be >= 0");
  const Dataset ds = load_manifest(manifest);
  const fs::path root = fs::exists(pred / "masks") ? pred : pred.parent_path();

  const int n = static_cast<int>(ds.expressions.size());
  std::vector<std::optional<ExpressionScore>> scores(ds.expressions.size());
  std::vector<std::string> errors(ds.expressions.size());
#pragma omp parallel for num_threads(std::max(1, std::min(workers, n))) schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto& task = ds.expressions[k];
    try {
      if (!task.ground_truth) throw Error("no ground truth");
      const auto track = read_masks(mask_dir(root, task), task.video_id);
      const auto& video = ds.video(task.video_id);
      auto s = score_expression(track, *task.ground_truth, tolerance_for(video, tolerance),
                                task.expression_id, Execution::Serial);
      scores[k] = std::move(s);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }

  std::vector<ExpressionScore> ok;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k]) {
      ok.push_back(*scores[k]);
    } else {
      std::cerr << fmt::format("error: {}/{}: {}\n", ds.expressions[k].video_id,
                               ds.expressions[k].expression_id, errors[k]);
    }
  }
  if (ok.empty()) {
    std::cerr << "error: no expression could be scored\n";
    return kEnvironment;
  }
  const Report report = make_report(ds.manifest.name, ok);
  for (const auto f : formats) {
    write_report(report, root / fmt::format("report.{}", to_string(f)), f);
  }
  print_scores(report);
  return ok.size() == scores.size() ? kOk : kPartial;
}

// --- compare ----------------------------------------------------------------

struct GridFlags {
  std::vector<std::string> modes{"legacy", "consistent"};
  std::vector<std::string> samplings{"first", "uniform"};
  std::vector<int> frames{5};
  std::vector<std::string> policies{"all"};
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
  std::string report;
};

int cmd_compare(const fs::path& manifest, const GridFlags& g, const BackendFlags& bf) {
  if (g.modes.empty() || g.samplings.empty() || g.frames.empty() || g.policies.empty()) {
    throw UsageError("empty configuration grid");
  }
  std::vector<PipelineConfig> grid;
  for (const auto& m : g.modes) {
    for (const auto& s : g.samplings) {
      for (int t : g.frames) {
        for (const auto& p : g.policies) {
          PipelineFlags pf{m, s, t, p, g.tolerance, g.seed};
          grid.push_back(make_config(pf));
        }
      }
    }
  }
  const BackendOptions backend = make_backend(bf, Seed{g.seed});
  const Dataset ds = load_for(manifest, backend.kind);
  if (ds.expressions.empty()) throw Error("manifest has no expressions");

  std::string csv = "mode,sampling,frames,prompt_policy,expressions,failed,J&F,J,F\n";
  std::cout << fmt::format("{:<11} {:<15} {:>3} {:<8} {:>5} {:>5} {:>5}\n", "mode", "sampling",
                           "T", "prompts", "J&F", "J", "F");
  std::size_t failed_rows = 0;
  for (const auto& cfg : grid) {
    const BatchResult result = run_batch(ds, cfg, backend, bf.workers);
    if (!result.environment_error.empty()) {
      std::cerr << "error: backend unavailable: " << result.environment_error << "\n";
      return kEnvironment;
    }
    std::string jf = "-", j = "-", f = "-";
    if (result.failures() == 0) {
      std::vector<MaskTrack> tracks;
      for (const auto& o : result.outcomes) tracks.push_back(*o.track);
      const auto total = score_dataset(score_batch(ds, tracks, cfg.boundary_tolerance, bf.workers));
      jf = format_score(total.jf);
      j = format_score(total.j);
      f = format_score(total.f);
    } else {
      ++failed_rows;
      for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
        if (!result.outcomes[i].ok()) {
          std::cerr << fmt::format("error: {} {} T={} {}: {}/{}: {}\n", to_string(cfg.mode),
                                   to_string(cfg.sampling), cfg.frames,
                                   cfg.prompt_policy.to_string(), ds.expressions[i].video_id,
                                   ds.expressions[i].expression_id, result.outcomes[i].error);
        }
      }
    }
    std::cout << fmt::format("{:<11} {:<15} {:>3} {:<8} {:>5} {:>5} {:>5}\n", to_string(cfg.mode),
                             to_string(cfg.sampling), cfg.frames, cfg.prompt_policy.to_string(), jf,
                             j, f);
    csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(cfg.mode), to_string(cfg.sampling),
                       cfg.frames, cfg.prompt_policy.to_string(), ds.expressions.size(),
                       result.failures(), jf, j, f);
  }
  if (!g.report.empty()) {
    const fs::path p(g.report);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << csv;
  }
  if (failed_rows == grid.size()) return kEnvironment;
  return failed_rows > 0 ? kPartial : kOk;
}

// --- import-mevis -----------------------------------------------------------

int cmd_import_mevis(const fs::path& meta, const fs::path& annotations, const fs::path& out,
                     const std::string& frames_root, const std::string& ext,
                     const std::string& name) {
  MevisImportOptions opts;
  if (!frames_root.empty()) opts.frames_root = frames_root;
  opts.frame_extension = ext;
  opts.manifest_dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
  opts.dataset_name = name;
  const auto result = import_mevis_meta(meta, annotations, opts);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  save_manifest(result.manifest, out);
  std::cout << fmt::format("wrote {} video(s), {} expression(s) to {}\n",
                           result.manifest.videos.size(), result.manifest.expressions.size(),
                           out.string());
  return kOk;
}

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Referring video object segmentation inference harness"};
  app.require_subcommand(1);

  std::string synth_source;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "write a synthetic dataset (preset name or spec .json)");
  synth->add_option("source", synth_source, "preset name or scene spec file")->required();
  synth->add_option("out", synth_out, "output directory")->required();

  std::string plan_strategy;
  int plan_i = 0;
  int plan_t = 0;
  std::uint64_t plan_seed = 0;
  auto* plan = app.add_subcommand("plan", "print the frame indices a sampling strategy selects");
  plan->add_option("strategy", plan_strategy, "first | uniform | uniform-offset | random")
      ->required();
  plan->add_option("I", plan_i, "frames in the video")->required()->check(CLI::PositiveNumber);
  plan->add_option("T", plan_t, "frames to sample")->required()->check(CLI::PositiveNumber);
  plan->add_option("--seed", plan_seed, "seed for randomized strategies")->capture_default_str();

  std::string run_manifest;
  std::string run_out;
  PipelineFlags run_pf;
  BackendFlags run_bf;
  run_bf.workers = default_workers();
  auto* run = app.add_subcommand("run", "run the pipeline over every expression of a manifest");
  run->add_option("--manifest", run_manifest, "dataset manifest")->required();
  run->add_option("--out", run_out, "output directory")->required();
  add_pipeline_flags(run, run_pf);
  add_backend_flags(run, run_bf);

  std::string eval_pred;
  std::string eval_manifest;
  std::optional<double> eval_tol;
  std::string eval_format = "json";
  int eval_workers = default_workers();
  auto* eval = app.add_subcommand("eval", "score predicted masks against ground truth");
  eval->add_option("--pred", eval_pred, "run output directory")->required();
  eval->add_option("--manifest", eval_manifest, "dataset manifest")->required();
  eval->add_option("--tolerance", eval_tol, "boundary tolerance in pixels");
  eval->add_option("--format", eval_format, "json | csv | both")->capture_default_str();
  eval->add_option("--workers", eval_workers, "expressions scored concurrently")
      ->envname("RVOSH_WORKERS")
      ->check(CLI::PositiveNumber);

  std::string cmp_manifest;
  GridFlags grid;
  BackendFlags cmp_bf;
  cmp_bf.workers = default_workers();
  auto* compare = app.add_subcommand("compare", "evaluate a grid of pipeline configurations");
  compare->add_option("--manifest", cmp_manifest, "dataset manifest")->required();
  compare->add_option("--mode", grid.modes, "modes (comma separated)")->delimiter(',');
  compare->add_option("--sampling", grid.samplings, "strategies (comma separated)")->delimiter(',');
  compare->add_option("--frames", grid.frames, "frame counts T (comma separated)")->delimiter(',');
  compare->add_option("--prompt-policy", grid.policies, "prompt policies (comma separated)")
      ->delimiter(',');
  compare->add_option("--tolerance", grid.tolerance, "boundary tolerance in pixels");
  compare->add_option("--seed", grid.seed, "root seed")->capture_default_str();
  compare->add_option("--report", grid.report, "also write the table as CSV");
  add_backend_flags(compare, cmp_bf);

  std::string mv_meta;
  std::string mv_anno;
  std::string mv_out;
  std::string mv_frames;
  std::string mv_ext = ".jpg";
  std::string mv_name = "mevis";
  auto* mevis = app.add_subcommand("import-mevis", "convert MeViS-style metadata to a manifest");
  mevis->add_option("--meta", mv_meta, "meta_expressions.json")->required();
  mevis->add_option("--annotations", mv_anno, "per-frame annotation root")->required();
  mevis->add_option("--out", mv_out, "manifest path to write")->required();
  mevis->add_option("--frames-root", mv_frames, "frame image root (default: ../JPEGImages)");
  mevis->add_option("--frame-ext", mv_ext, "frame image extension")->capture_default_str();
  mevis->add_option("--name", mv_name, "dataset name")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return cmd_synth(synth_source, synth_out);
    if (*plan) return cmd_plan(plan_strategy, plan_i, plan_t, plan_seed);
    if (*run) return cmd_run(run_manifest, run_out, run_pf, run_bf);
    if (*eval) return cmd_eval(eval_pred, eval_manifest, eval_tol, eval_format, eval_workers);
    if (*compare) return cmd_compare(cmp_manifest, grid, cmp_bf);
    if (*mevis) return cmd_import_mevis(mv_meta, mv_anno, mv_out, mv_frames, mv_ext, mv_name);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnvironment;
  }
  return kUsage;
}
