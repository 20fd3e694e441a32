#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include <png.h>

#include "oracles.hpp"
#include "rvosh/error.hpp"
#include "rvosh/manifest.hpp"
#include "rvosh/mevis.hpp"
#include "rvosh/png_io.hpp"
#include "rvosh/report.hpp"
#include "rvosh/rle.hpp"
#include "rvosh/synth.hpp"
#include "support.hpp"

using namespace rvosh;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

/// 8-bit greyscale PNG written directly with libpng, bypassing the codec under test.
void write_grey_png(const fs::path& p, int h, int w, std::uint8_t value) {
  FILE* f = std::fopen(p.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(static_cast<std::size_t>(w), value);
  for (int y = 0; y < h; ++y) png_write_row(png, row.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

}  // namespace

TEST(Rle, Examples) {
  EXPECT_EQ(rle_encode_text(BinaryMask(2, 2)), "2 2:4");
  EXPECT_EQ(rle_encode_text(BinaryMask(2, 2, {1, 1, 1, 1})), "2 2:0 4");
  EXPECT_EQ(rle_encode_text(BinaryMask(2, 2, {1, 0, 0, 1})), "2 2:0 1 2 1");
  EXPECT_EQ(rle_decode_text("2 2:4"), BinaryMask(2, 2));
  EXPECT_THROW(rle_decode_text("2 2:3"), FormatError);
}

TEST(Rle, RejectsMalformedText) {
  for (const char* bad : {"", "2 2", "2:4", "2 x:4", "2 2:4 a", "0 2:0", "2 2:1 0 3", "2 2:-1 5",
                          "2 2 2:8", "2 2:"}) {
    EXPECT_THROW(rle_decode_text(bad), FormatError) << bad;
  }
}

TEST(Rle, RoundTripsRandomMasks) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int i = 0; i < 200; ++i) {
    const auto m = oracle::random_mask(rng, dim(rng), dim(rng), i % 5 * 0.25);
    const auto text = rle_encode_text(m);
    EXPECT_EQ(rle_decode_text(text), m);
    EXPECT_EQ(rle_encode_text(rle_decode_text(text)), text);
  }
}

TEST(Png, RgbAndLabelRoundTrip) {
  support::TempDir dir("png");
  std::mt19937_64 rng(42);
  std::vector<std::uint8_t> px(3 * 7 * 5);
  for (auto& p : px) p = static_cast<std::uint8_t>(rng());
  const RgbImage img(7, 5, px);
  write_rgb_png(dir / "a.png", img);
  EXPECT_EQ(read_rgb_png(dir / "a.png"), img);
  EXPECT_EQ(read_png_size(dir / "a.png"), std::make_pair(7, 5));

  std::vector<std::uint8_t> labels(6 * 4);
  for (auto& l : labels) l = static_cast<std::uint8_t>(rng() % 9);
  const LabelMap lm(6, 4, labels);
  write_label_png(dir / "l.png", lm);
  EXPECT_EQ(read_label_png(dir / "l.png"), lm);
}

TEST(Png, MaskTracksRoundTrip) {
  support::TempDir dir("png");
  std::mt19937_64 rng(43);
  for (int i = 0; i < 20; ++i) {
    MaskTrack t("v");
    const int h = 1 + static_cast<int>(rng() % 40), w = 1 + static_cast<int>(rng() % 40);
    for (int f = 0; f < 3; ++f) t.set(f, oracle::random_mask(rng, h, w, 0.3));
    const auto d = dir / ("t" + std::to_string(i));
    write_masks(t, d);
    EXPECT_TRUE(fs::exists(d / "00000.png"));
    EXPECT_EQ(read_masks(d, "v"), t);
  }
}

TEST(Png, ReadErrors) {
  support::TempDir dir("png");
  fs::create_directories(dir / "empty");
  EXPECT_THROW(read_masks(dir / "empty", "v"), IoError);
  EXPECT_THROW(read_masks(dir / "absent", "v"), IoError);
  try {
    read_masks(dir / "empty", "v");
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("no frames"), std::string::npos);
  }
  fs::create_directories(dir / "bad");
  write_grey_png(dir / "bad" / "00000.png", 2, 2, 3);
  try {
    read_masks(dir / "bad", "v");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("non-binary annotation"), std::string::npos);
  }
  write_text(dir / "junk.png", "not a png");
  EXPECT_THROW(read_rgb_png(dir / "junk.png"), FormatError);
  EXPECT_THROW(read_rgb_png(dir / "missing.png"), IoError);
}

TEST(Manifest, MinimalLoadAndObjectUnion) {
  support::TempDir dir("manifest");
  write_rgb_png(dir / "f/0.png", RgbImage(4, 4));
  LabelMap lm(4, 4);
  lm.set(0, 0, 2);
  lm.set(1, 2, 5);
  lm.set(3, 3, 7);
  write_label_png(dir / "a/0.png", lm);
  DatasetManifest m;
  m.name = "mini";
  m.videos = {{"v", 4, 4, {"f/0.png"}}};
  m.expressions = {{"e", "v", "two things", {2, 5}, {"a/0.png"}}};
  save_manifest(m, dir / "manifest.json");

  const auto ds = load_manifest(dir / "manifest.json");
  ASSERT_EQ(ds.videos.size(), 1u);
  EXPECT_EQ(ds.videos[0].frame_count(), 1);
  BinaryMask expected(4, 4);
  expected.set(0, 0);
  expected.set(1, 2);
  EXPECT_EQ(ds.expressions[0].ground_truth->at(0), expected);
  EXPECT_EQ(ds.expressions[0].object_ids, (std::set<int>{2, 5}));
}

TEST(Manifest, RejectsInvalidContent) {
  DatasetManifest m;
  m.name = "bad";
  m.videos = {{"v", 4, 4, {"f/0.png"}}};
  m.expressions = {{"e", "w", "x", {}, {}}};
  EXPECT_THROW(m.validate(), FormatError);
  m.expressions = {{"e", "v", "x", {5, 2}, {}}};
  EXPECT_THROW(m.validate(), FormatError);
  m.expressions = {{"e", "v", "x", {}, {"a.png"}}};
  EXPECT_THROW(m.validate(), FormatError);
  EXPECT_THROW(DatasetManifest::from_json("{"), FormatError);
  EXPECT_THROW(DatasetManifest::from_json(R"({"schema":"other/2","name":"x","videos":[],"expressions":[]})"),
               FormatError);
}

TEST(Manifest, LoadErrorsCarryPath) {
  support::TempDir dir("manifest");
  DatasetManifest m;
  m.name = "x";
  m.videos = {{"v", 4, 4, {"f/0.png"}}};
  save_manifest(m, dir / "manifest.json");
  try {
    load_manifest(dir / "manifest.json");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("manifest.json"), std::string::npos);
  }
  write_rgb_png(dir / "f/0.png", RgbImage(4, 5));
  EXPECT_THROW(load_manifest(dir / "manifest.json"), DimensionMismatch);
}

TEST(Manifest, ReserializationIsByteStable) {
  support::TempDir dir("manifest");
  for (const auto& name : preset_names()) {
    write_synthetic_dataset(preset(name), dir / name);
    const auto text = support::slurp(dir / name / "manifest.json");
    const auto ds = load_manifest(dir / name / "manifest.json");
    EXPECT_EQ(ds.manifest.to_json(), text);
    EXPECT_EQ(DatasetManifest::from_json(text).to_json(), text);
  }
}

TEST(Mevis, ImportsFixture) {
  support::TempDir dir("mevis");
  const fs::path anno = dir / "valid" / "Annotations";
  const fs::path frames = dir / "valid" / "JPEGImages";
  for (const char* f : {"00000", "00001", "00002"}) {
    LabelMap lm(6, 8);
    lm.set(1, 1, 1);
    lm.set(2, 5, 2);
    lm.set(4, 4, 3);
    write_label_png(anno / "vid1" / (std::string(f) + ".png"), lm);
    write_rgb_png(frames / "vid1" / (std::string(f) + ".png"), RgbImage(6, 8));
  }
  write_text(dir / "meta.json", R"({"videos": {
    "vid1": {"frames": ["00000", "00001", "00002"], "expressions": {
      "0": {"exp": "the cat", "anno_id": [1], "obj_id": [0]},
      "1": {"exp": "two dogs", "anno_id": [3, 2], "obj_id": [1, 2]},
      "2": {"exp": "the cat again", "anno_id": [1], "obj_id": [0]}}},
    "vid2": {"frames": ["00000"], "expressions": {}}}})");

  MevisImportOptions opts;
  opts.manifest_dir = dir.path();
  const auto r = import_mevis_meta(dir / "meta.json", anno, opts);
  ASSERT_EQ(r.manifest.expressions.size(), 3u);
  EXPECT_EQ(r.manifest.videos.size(), 1u);
  EXPECT_EQ(r.manifest.expressions[1].object_ids, (std::vector<int>{2, 3}));
  EXPECT_EQ(r.manifest.expressions[1].text, "two dogs");
  EXPECT_FALSE(r.warnings.empty());

  save_manifest(r.manifest, dir / "manifest.json");
  const auto ds = load_manifest(dir / "manifest.json");
  EXPECT_EQ(mask_area(ds.expressions[1].ground_truth->at(2)), 2u);
}

TEST(Mevis, EmptyAndBrokenInputs) {
  support::TempDir dir("mevis");
  write_text(dir / "empty.json", R"({"videos": {}})");
  const auto r = import_mevis_meta(dir / "empty.json", dir / "anno");
  EXPECT_TRUE(r.manifest.expressions.empty());
  EXPECT_FALSE(r.warnings.empty());

  write_text(dir / "missing.json", R"({"videos": {"v": {"frames": ["00000"], "expressions":
    {"0": {"exp": "x", "anno_id": [1], "obj_id": [0]}}}}})");
  EXPECT_THROW(import_mevis_meta(dir / "missing.json", dir / "anno"), IoError);

  write_label_png(dir / "anno" / "v" / "00000.png", LabelMap(2, 2));
  write_text(dir / "mismatch.json", R"({"videos": {"v": {"frames": ["00000"], "expressions":
    {"0": {"exp": "x", "anno_id": [1, 2], "obj_id": [0]}}}}})");
  EXPECT_THROW(import_mevis_meta(dir / "mismatch.json", dir / "anno"), FormatError);
}

TEST(Synth, StaticDiskGivesIdenticalFrames) {
  SyntheticSceneSpec s;
  s.frame_count = 3;
  s.height = 12;
  s.width = 12;
  SceneObject o;
  o.radius = 3;
  o.color = {200, 200, 40};
  o.centers = linear_trajectory(3, {6, 6}, {0, 0});
  o.last_visible = 2;
  s.objects = {o};
  const auto g = generate_scene(s);
  EXPECT_EQ(g.video.pixels(0), g.video.pixels(1));
  EXPECT_EQ(g.video.pixels(1), g.video.pixels(2));
  EXPECT_EQ(g.object_tracks.at(1).at(0), g.object_tracks.at(1).at(2));
  // Lattice points with dy^2 + dx^2 <= 9.
  EXPECT_EQ(mask_area(g.object_tracks.at(1).at(0)), 29u);
}

TEST(Synth, VisibilityWindow) {
  SyntheticSceneSpec s;
  s.frame_count = 10;
  s.height = 10;
  s.width = 10;
  SceneObject o;
  o.radius = 2;
  o.color = {200, 40, 40};
  o.centers = linear_trajectory(10, {5, 5}, {0, 0});
  o.first_visible = 5;
  o.last_visible = 9;
  s.objects = {o};
  const auto g = generate_scene(s);
  for (int t = 0; t < 5; ++t) EXPECT_EQ(mask_area(g.object_tracks.at(1).at(t)), 0u);
  for (int t = 5; t < 10; ++t) EXPECT_GT(mask_area(g.object_tracks.at(1).at(t)), 0u);
}

TEST(Synth, LaterObjectsOcclude) {
  SyntheticSceneSpec s;
  s.frame_count = 1;
  s.height = 8;
  s.width = 8;
  SceneObject a, b;
  a.shape = b.shape = ShapeKind::Rectangle;
  a.color = {200, 40, 40};
  b.color = {40, 40, 200};
  a.half_height = a.half_width = 2;  // rows/cols 1..5
  b.half_height = b.half_width = 2;  // rows/cols 3..7
  a.centers = {{3, 3}};
  b.centers = {{5, 5}};
  s.objects = {a, b};
  const auto g = generate_scene(s);
  const auto& ma = g.object_tracks.at(1).at(0);
  const auto& mb = g.object_tracks.at(2).at(0);
  // 25 pixels each; the 3x3 overlap rows/cols 3..5 belongs to the later object.
  EXPECT_EQ(mask_area(ma), 16u);
  EXPECT_EQ(mask_area(mb), 25u);
  for (int y = 3; y <= 5; ++y)
    for (int x = 3; x <= 5; ++x) {
      EXPECT_FALSE(ma.at(y, x));
      EXPECT_TRUE(mb.at(y, x));
      EXPECT_EQ(g.video.pixels(0).at(y, x), b.color);
    }
  std::size_t painted = 0;
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) painted += g.video.pixels(0).at(y, x) != s.background;
  EXPECT_EQ(painted, mask_area(ma) + mask_area(mb));
}

TEST(Synth, ValidationRejectsBadSpecs) {
  auto s = preset("static").scenes[0].scene;
  EXPECT_NO_THROW(s.validate());
  auto close = s;
  close.objects[1].color = {200, 40, 40};
  EXPECT_THROW(close.validate(), std::invalid_argument);
  auto dark = s;
  dark.objects[0].color = {40, 40, 40};
  EXPECT_THROW(dark.validate(), std::invalid_argument);
  auto outside = s;
  outside.objects[0].centers[3] = {100, 5};
  EXPECT_THROW(outside.validate(), std::invalid_argument);
  auto noisy = s;
  noisy.pixel_noise = 9;
  EXPECT_THROW(noisy.validate(), std::invalid_argument);
  EXPECT_THROW(preset("nope"), std::invalid_argument);
}

TEST(Synth, PresetsAndDeterminism) {
  const auto late = generate_scene(preset("late-appearance").scenes[0].scene);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(mask_area(late.object_tracks.at(2).at(t)), 0u);
  EXPECT_EQ(generate_scene(preset("static").scenes[0].scene).video.frame_count(), 10);

  support::TempDir dir("synth");
  const std::string spec = R"({"dataset": "custom", "scenes": [{"id": "c", "frames": 4,
    "height": 16, "width": 20, "seed": 5, "pixel_noise": 4,
    "objects": [{"shape": "disk", "radius": 3, "color": [220, 40, 40], "start": [8, 4],
                 "velocity": [0, 3]}],
    "expressions": [{"id": "0", "text": "ball", "object_ids": [1]}]}]})";
  write_synthetic_dataset(parse_synthetic_spec(spec), dir / "a");
  write_synthetic_dataset(parse_synthetic_spec(spec), dir / "b");
  EXPECT_EQ(support::tree_contents(dir / "a"), support::tree_contents(dir / "b"));
  EXPECT_THROW(parse_synthetic_spec("{}"), FormatError);
}

TEST(Report, Formatting) {
  EXPECT_EQ(format_score(0.5225), "52.3");
  EXPECT_EQ(format_score(1.0), "100.0");
  EXPECT_EQ(format_score(0.0), "0.0");
  EXPECT_EQ(format_score(0.6225), "62.3");
  EXPECT_EQ(format_score(0.12345), "12.3");
  DatasetScore s{1, 0.592, 0.652, jf_mean(0.592, 0.652)};
  EXPECT_EQ(format_row(s), "62.2 59.2 65.2");
}

TEST(Report, CsvAndJson) {
  const std::vector<ExpressionScore> e{{"v", "a", 0.5, 0.7, 0.6, {}}, {"v", "b", 1.0, 1.0, 1.0, {}}};
  const auto r = make_report("demo", e);
  EXPECT_EQ(render_report(r, ReportFormat::Csv), "dataset,expressions,J&F,J,F\ndemo,2,80.0,75.0,85.0\n");
  const auto json = render_report(r, ReportFormat::Structured);
  EXPECT_LT(json.find("\"dataset\""), json.find("\"J&F\""));
  EXPECT_NE(json.find("\"J&F\": \"80.0\""), std::string::npos);
  EXPECT_THROW(make_report("x", {}), std::invalid_argument);
}
