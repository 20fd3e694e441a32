#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "rvosh/synth.hpp"

namespace fs = std::filesystem;

namespace support {

TempDir::TempDir(std::string_view tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (std::string(tag) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

rvosh::Dataset load_preset(std::string_view name, const fs::path& dir) {
  rvosh::write_synthetic_dataset(rvosh::preset(name), dir);
  rvosh::Dataset ds = rvosh::load_manifest(dir / "manifest.json");
  rvosh::load_pixels(ds);
  return ds;
}

rvosh::DatasetScore run_and_score(const rvosh::Dataset& dataset, const rvosh::PipelineConfig& cfg,
                                  const rvosh::BackendOptions& backend, int workers) {
  const auto result = rvosh::run_batch(dataset, cfg, backend, workers);
  std::vector<rvosh::MaskTrack> tracks;
  for (const auto& o : result.outcomes) {
    if (!o.ok()) throw std::runtime_error("expression failed: " + o.error);
    tracks.push_back(*o.track);
  }
  return rvosh::score_dataset(rvosh::score_batch(dataset, tracks, cfg.boundary_tolerance, workers));
}

rvosh::BackendOptions noisy_toy() {
  rvosh::BackendOptions b;
  b.noise.swap_probability = kToySwap;
  b.noise.seed = rvosh::Seed{kToySeed};
  return b;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::pair<std::string, std::string>> tree_contents(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), root).string(), slurp(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int geometric_mean_tenths(const ScoreRow& r) {
  return static_cast<int>(std::floor(std::sqrt(double(r.j) * double(r.f)) + 0.5));
}

const std::vector<ScoreRow>& published_rows() {
  // Comparison to prior work on MeViS / Ref-YT-VOS / Ref-DAVIS17, the ReVOS
  // reasoning benchmark, and the consistency ablation on MeViS val.
  static const std::vector<ScoreRow> rows = {
      {"LISA LLaVA-7B MeViS", 372, 351, 394},
      {"LISA LLaVA-7B Ref-YT-VOS", 539, 534, 543},
      {"LISA LLaVA-7B Ref-DAVIS17", 648, 622, 673},
      {"LISA LLaVA-13B MeViS", 379, 358, 400},
      {"LISA LLaVA-13B Ref-YT-VOS", 544, 540, 548},
      {"LISA LLaVA-13B Ref-DAVIS17", 660, 632, 688},
      {"TrackGPT LLaVA-7B MeViS", 401, 376, 426},
      {"TrackGPT LLaVA-7B Ref-YT-VOS", 564, 553, 574},
      {"TrackGPT LLaVA-7B Ref-DAVIS17", 632, 594, 670},
      {"TrackGPT LLaVA-13B MeViS", 412, 392, 431},
      {"TrackGPT LLaVA-13B Ref-YT-VOS", 595, 581, 608},
      {"TrackGPT LLaVA-13B Ref-DAVIS17", 665, 627, 704},
      {"PSALM Phi-1.5 Ref-DAVIS17", 688, 659, 717},
      {"VISA Chat-UniVi-7B MeViS", 435, 407, 463},
      {"VISA Chat-UniVi-7B Ref-YT-VOS", 615, 598, 632},
      {"VISA Chat-UniVi-7B Ref-DAVIS17", 694, 663, 725},
      {"VISA Chat-UniVi-13B MeViS", 445, 418, 471},
      {"VISA Chat-UniVi-13B Ref-YT-VOS", 630, 614, 647},
      {"VISA Chat-UniVi-13B Ref-DAVIS17", 704, 670, 738},
      {"VideoLISA Phi-3-V-3.8B MeViS", 444, 413, 476},
      {"VideoLISA Phi-3-V-3.8B Ref-YT-VOS", 637, 617, 657},
      {"VideoLISA Phi-3-V-3.8B Ref-DAVIS17", 688, 649, 727},
      {"InstructSeg Mipha-3B Ref-YT-VOS", 675, 654, 695},
      {"InstructSeg Mipha-3B Ref-DAVIS17", 711, 673, 749},
      {"VideoGLaMM Phi3-Mini-3.8B MeViS", 452, 420, 482},
      {"SAMWISE RoBERTa MeViS", 495, 466, 524},
      {"SAMWISE RoBERTa Ref-YT-VOS", 692, 678, 706},
      {"SAMWISE RoBERTa Ref-DAVIS17", 706, 674, 745},
      {"VRS-HQ Chat-UniVi-13B MeViS", 509, 480, 537},
      {"VRS-HQ Chat-UniVi-13B Ref-YT-VOS", 710, 690, 731},
      {"VRS-HQ Chat-UniVi-13B Ref-DAVIS17", 744, 710, 779},
      {"GLUS LLaVA-7B MeViS", 513, 485, 542},
      {"GLUS LLaVA-7B Ref-YT-VOS", 673, 655, 690},
      {"MPG-SAM2 BEiT MeViS", 537, 507, 567},
      {"MPG-SAM2 BEiT Ref-YT-VOS", 739, 717, 761},
      {"MPG-SAM2 BEiT Ref-DAVIS17", 724, 688, 760},
      {"Sa2VA 4B 5f MeViS", 464, 433, 495},
      {"Sa2VA 4B 5f Ref-YT-VOS", 713, 691, 735},
      {"Sa2VA 4B 5f Ref-DAVIS17", 737, 696, 778},
      {"Sa2VA-i 1B 5f MeViS", 522, 496, 549},
      {"Sa2VA-i 1B 5f Ref-YT-VOS", 709, 689, 728},
      {"Sa2VA-i 1B 5f Ref-DAVIS17", 745, 709, 780},
      {"Sa2VA-i 4B 5f MeViS", 562, 535, 590},
      {"Sa2VA-i 4B 5f Ref-YT-VOS", 741, 712, 763},
      {"Sa2VA-i 4B 5f Ref-DAVIS17", 776, 740, 811},
      {"Sa2VA-i 8B 5f MeViS", 587, 557, 587},
      {"Sa2VA-i 8B 5f Ref-YT-VOS", 747, 725, 767},
      {"Sa2VA-i 8B 5f Ref-DAVIS17", 801, 767, 835},
      {"Sa2VA-i 26B 5f MeViS", 622, 592, 652},
      {"Sa2VA-i 26B 5f Ref-YT-VOS", 764, 742, 786},
      {"Sa2VA-i 26B 5f Ref-DAVIS17", 819, 784, 854},
      {"Sa2VA-i 1B 8f MeViS", 526, 499, 553},
      {"Sa2VA-i 1B 8f Ref-YT-VOS", 703, 684, 722},
      {"Sa2VA-i 1B 8f Ref-DAVIS17", 736, 701, 771},
      {"Sa2VA-i 4B 8f MeViS", 566, 539, 593},
      {"Sa2VA-i 4B 8f Ref-YT-VOS", 732, 710, 754},
      {"Sa2VA-i 4B 8f Ref-DAVIS17", 786, 751, 821},
      {"Sa2VA-i 8B 8f MeViS", 595, 566, 624},
      {"Sa2VA-i 8B 8f Ref-YT-VOS", 739, 717, 763},
      {"Sa2VA-i 8B 8f Ref-DAVIS17", 791, 756, 827},
      {"Sa2VA-i 26B 8f MeViS", 632, 601, 662},
      {"Sa2VA-i 26B 8f Ref-YT-VOS", 765, 743, 787},
      {"Sa2VA-i 26B 8f Ref-DAVIS17", 812, 775, 849},
      {"Sa2VA-i-FT 4B 8f MeViS", 573, 546, 600},
      {"Sa2VA-i-FT 4B 8f Ref-YT-VOS", 741, 719, 763},
      {"Sa2VA-i-FT 4B 8f Ref-DAVIS17", 793, 758, 827},
      {"Sa2VA-i 26B 12f MeViS", 637, 606, 668},
      {"Sa2VA-i 26B 12f Ref-YT-VOS", 757, 735, 779},
      {"Sa2VA-i 26B 12f Ref-DAVIS17", 807, 770, 843},
      {"VISA Chat-UniVi-7B ReVOS reasoning", 392, 367, 417},
      {"VISA Chat-UniVi-7B ReVOS referring", 529, 511, 547},
      {"VISA Chat-UniVi-7B ReVOS overall", 461, 439, 482},
      {"VISA Chat-UniVi-13B ReVOS reasoning", 409, 383, 435},
      {"VISA Chat-UniVi-13B ReVOS referring", 541, 523, 558},
      {"VISA Chat-UniVi-13B ReVOS overall", 475, 453, 497},
      {"InstructSeg Mipha-3B ReVOS reasoning", 519, 492, 547},
      {"InstructSeg Mipha-3B ReVOS referring", 570, 548, 592},
      {"InstructSeg Mipha-3B ReVOS overall", 545, 520, 569},
      {"VRS-HQ Chat-UniVi-13B ReVOS reasoning", 568, 541, 594},
      {"VRS-HQ Chat-UniVi-13B ReVOS referring", 633, 611, 655},
      {"VRS-HQ Chat-UniVi-13B ReVOS overall", 600, 576, 625},
      {"Sa2VA 4B ReVOS reasoning", 562, 532, 591},
      {"Sa2VA 4B ReVOS referring", 630, 605, 655},
      {"Sa2VA 4B ReVOS overall", 596, 568, 623},
      {"Sa2VA-i 1B ReVOS reasoning", 483, 459, 507},
      {"Sa2VA-i 1B ReVOS referring", 586, 564, 607},
      {"Sa2VA-i 1B ReVOS overall", 534, 512, 507},
      {"Sa2VA-i 4B ReVOS reasoning", 609, 582, 636},
      {"Sa2VA-i 4B ReVOS referring", 665, 643, 688},
      {"Sa2VA-i 4B ReVOS overall", 637, 612, 661},
      {"Sa2VA-i 8B ReVOS reasoning", 631, 603, 658},
      {"Sa2VA-i 8B ReVOS referring", 687, 663, 711},
      {"Sa2VA-i 8B ReVOS overall", 659, 633, 685},
      {"Sa2VA-i 26B ReVOS reasoning", 658, 629, 713},
      {"Sa2VA-i 26B ReVOS referring", 713, 690, 735},
      {"Sa2VA-i 26B ReVOS overall", 685, 659, 710},
      {"Sa2VA-i-FT 4B ReVOS reasoning", 615, 588, 642},
      {"Sa2VA-i-FT 4B ReVOS referring", 671, 648, 694},
      {"Sa2VA-i-FT 4B ReVOS overall", 643, 618, 668},
      {"ablation Sa2VA-4B first 5f", 464, 433, 495},
      {"ablation Sa2VA-i-4B first 5f", 520, 492, 549},
      {"ablation Sa2VA-i-4B uniform 5f", 562, 535, 590},
  };
  return rows;
}

}  // namespace support
