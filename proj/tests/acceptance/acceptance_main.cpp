// Copyright 2026 The mie authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Release-gate checks, one per criterion, each printing a single PASS/FAIL
// line with the numbers behind the verdict:
//
//   C1  enhancement matches a committed golden image bit-exactly
//   C2  static scenes produce exactly zero motion response
//   C3  evaluation metrics reproduce hand-computed values; greedy matching
//       is near-optimal on randomized instances
//   C4  the enhanced red channel beats the plain color red channel by a
//       wide F1 margin on the committed benchmark scenes
//   C5  the temporal filter reproduces its hand trace and its idempotence
//       and monotonicity properties
//   C6  dataset statistics reproduce a published-scale manifest's ratios
//   C7  a camera-day of 1080p frames enhances within the throughput budget
//       with bit-identical multi-worker output
//
// The golden image for C1 is produced by `--regen-golden`, which renders it
// with the plain reference implementation in this file (direct 2-D
// convolution, no separability, no lookup tables) rather than the library,
// so the two code paths check each other.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mie/abundance.hpp"
#include "mie/civil_time.hpp"
#include "mie/detector.hpp"
#include "mie/enhance.hpp"
#include "mie/error.hpp"
#include "mie/eval.hpp"
#include "mie/geometry.hpp"
#include "mie/image_io.hpp"
#include "mie/manifest.hpp"
#include "mie/records.hpp"
#include "mie/rng.hpp"
#include "mie/stats.hpp"
#include "mie/synth.hpp"

#ifndef MIE_ACCEPT_FIXTURES
#error "MIE_ACCEPT_FIXTURES must point at the acceptance fixtures directory"
#endif
#ifndef MIE_EASY_FIXTURE
#error "MIE_EASY_FIXTURE must point at the easy benchmark scene"
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Self-deleting scratch directory under the system temp root.
class ScratchDir {
 public:
  ScratchDir() {
    std::string name =
        (std::filesystem::temp_directory_path() / "mie-acceptance-XXXXXX").string();
    if (mkdtemp(name.data()) == nullptr) {
      throw mie::IoError("cannot create scratch directory " + name);
    }
    path_ = name;
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string format_double(double value, int digits = 3) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

// --- reference enhancement (kept deliberately naive) -------------------------
//
// Straight-line restatement of the transform: double-precision luminance,
// direct 2-D binomial convolution with one round-half-up division, absolute
// three-frame difference saturating at 255, and the channel embedding. No
// lookup tables, no separable passes, no shared code with the library.

mie::GrayFrame reference_grayscale(const mie::ColorFrame& frame) {
  mie::GrayFrame gray;
  gray.width = frame.width;
  gray.height = frame.height;
  gray.samples.resize(gray.pixel_count());
  for (std::size_t i = 0; i < gray.samples.size(); ++i) {
    const double lum = 0.299 * frame.r[i] + 0.587 * frame.g[i] + 0.114 * frame.b[i];
    gray.samples[i] = static_cast<std::uint8_t>(lum + 0.5);
  }
  return gray;
}

mie::GrayFrame reference_blur5(const mie::GrayFrame& gray) {
  static constexpr int kTap[5] = {1, 4, 6, 4, 1};
  mie::GrayFrame out;
  out.width = gray.width;
  out.height = gray.height;
  out.samples.resize(out.pixel_count());
  for (int y = 0; y < gray.height; ++y) {
    for (int x = 0; x < gray.width; ++x) {
      std::uint64_t acc = 0;
      for (int dy = -2; dy <= 2; ++dy) {
        const int sy = std::clamp(y + dy, 0, gray.height - 1);
        for (int dx = -2; dx <= 2; ++dx) {
          const int sx = std::clamp(x + dx, 0, gray.width - 1);
          acc += static_cast<std::uint64_t>(kTap[dy + 2]) * kTap[dx + 2] *
                 gray.samples[static_cast<std::size_t>(sy) * gray.width + sx];
        }
      }
      out.samples[static_cast<std::size_t>(y) * gray.width + x] =
          static_cast<std::uint8_t>((acc + 128) / 256);
    }
  }
  return out;
}

mie::ColorFrame reference_enhance(const mie::ColorFrame& prev, const mie::ColorFrame& curr,
                                  const mie::ColorFrame& next) {
  const mie::GrayFrame p = reference_blur5(reference_grayscale(prev));
  const mie::GrayFrame c = reference_blur5(reference_grayscale(curr));
  const mie::GrayFrame n = reference_blur5(reference_grayscale(next));

  mie::ColorFrame out;
  out.width = curr.width;
  out.height = curr.height;
  out.r.resize(out.pixel_count());
  out.g = curr.g;
  out.b.resize(out.pixel_count());
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    const int motion = std::abs(static_cast<int>(c.samples[i]) - p.samples[i]) +
                       std::abs(static_cast<int>(n.samples[i]) - c.samples[i]);
    out.r[i] = static_cast<std::uint8_t>(std::min(motion, 255));
    out.b[i] = static_cast<std::uint8_t>((curr.b[i] + curr.r[i] + 1) >> 1);
  }
  return out;
}

// --- C1: enhancement vs committed golden -------------------------------------

/// A 64x64 scene: shaded gradient background, a bright square 16 px further
/// right every frame, and one frame-specific speckle pixel each.
mie::ColorFrame c1_frame(int index) {
  mie::ColorFrame frame;
  frame.width = 64;
  frame.height = 64;
  frame.r.resize(frame.pixel_count());
  frame.g.resize(frame.pixel_count());
  frame.b.resize(frame.pixel_count());
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * 64 + x;
      frame.r[i] = static_cast<std::uint8_t>(40 + x);
      frame.g[i] = static_cast<std::uint8_t>(60 + ((x + y) >> 1));
      frame.b[i] = static_cast<std::uint8_t>(30 + y);
    }
  }
  const int left = 10 + 16 * index;
  for (int y = 26; y < 38; ++y) {
    for (int x = left; x < left + 12; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * 64 + x;
      frame.r[i] = 200;
      frame.g[i] = 220;
      frame.b[i] = 180;
    }
  }
  const std::size_t speckles[3] = {5u * 64 + 5, 12u * 64 + 50, 55u * 64 + 20};
  frame.r[speckles[index]] = 255;
  frame.g[speckles[index]] = 16;
  frame.b[speckles[index]] = 240;
  return frame;
}

bool same_pixels(const mie::ColorFrame& a, const mie::ColorFrame& b) {
  return a.width == b.width && a.height == b.height && a.r == b.r && a.g == b.g && a.b == b.b;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict c1_enhancement_exactness(bool regen) {
  const std::filesystem::path golden_path =
      std::filesystem::path(MIE_ACCEPT_FIXTURES) / "c1_golden.png";
  const mie::ColorFrame prev = c1_frame(0);
  const mie::ColorFrame curr = c1_frame(1);
  const mie::ColorFrame next = c1_frame(2);
  const mie::ColorFrame expected = reference_enhance(prev, curr, next);

  if (regen) {
    mie::write_png(expected, golden_path);
    return {true, "regenerated " + golden_path.string()};
  }

  const auto start = Clock::now();
  const mie::EnhancedFrame enhanced = mie::enhance(prev, curr, next, mie::MieConfig{});
  const double elapsed = seconds_since(start);

  const mie::ColorFrame golden = mie::decode_image(golden_path);
  const bool matches_golden = same_pixels(enhanced.image, golden);
  const bool matches_reference = same_pixels(enhanced.image, expected);
  return {matches_golden && matches_reference && elapsed < 1.0,
          std::string("golden ") + (matches_golden ? "matches" : "DIFFERS") + ", reference " +
              (matches_reference ? "matches" : "DIFFERS") + " bit-exactly; " +
              format_double(elapsed) + "s < 1s"};
}

// --- C2: static scenes produce zero motion -----------------------------------

Verdict c2_static_nullity() {
  const auto start = Clock::now();
  mie::Rng rng(20260101);
  int red_nonzero = 0;
  int green_changed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int width = static_cast<int>(rng.uniform_int(16, 96));
    const int height = static_cast<int>(rng.uniform_int(16, 96));
    mie::ColorFrame frame;
    frame.width = width;
    frame.height = height;
    frame.r.resize(frame.pixel_count());
    frame.g.resize(frame.pixel_count());
    frame.b.resize(frame.pixel_count());
    for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
      const std::uint64_t bits = rng.next_u64();
      frame.r[i] = static_cast<std::uint8_t>(bits);
      frame.g[i] = static_cast<std::uint8_t>(bits >> 8);
      frame.b[i] = static_cast<std::uint8_t>(bits >> 16);
    }
    const mie::EnhancedFrame enhanced = mie::enhance(frame, frame, frame, mie::MieConfig{});
    if (std::any_of(enhanced.image.r.begin(), enhanced.image.r.end(),
                    [](std::uint8_t v) { return v != 0; })) {
      ++red_nonzero;
    }
    if (enhanced.image.g != frame.g) ++green_changed;
  }
  const double elapsed = seconds_since(start);
  return {red_nonzero == 0 && green_changed == 0 && elapsed < 5.0,
          "100 random static triples: " + std::to_string(red_nonzero) +
              " with nonzero motion, " + std::to_string(green_changed) +
              " with altered green; " + format_double(elapsed) + "s < 5s"};
}

// --- C3: metric oracle --------------------------------------------------------

/// Largest matching over the feasible pairs, by exhaustive recursion.
int best_matching(const std::vector<std::vector<int>>& feasible, std::size_t det,
                  std::vector<bool>& used) {
  if (det == feasible.size()) return 0;
  int best = best_matching(feasible, det + 1, used);
  for (int annotation : feasible[det]) {
    if (used[annotation]) continue;
    used[annotation] = true;
    best = std::max(best, 1 + best_matching(feasible, det + 1, used));
    used[annotation] = false;
  }
  return best;
}

Verdict c3_metric_oracle() {
  const auto start = Clock::now();
  constexpr double kTolerance = 1e-9;
  std::vector<std::string> problems;

  // Hand example 1: two sites of known counts.
  {
    const std::map<std::string, mie::MatchCounts> counts{{"A", {8, 2, 2}}, {"B", {2, 2, 8}}};
    const mie::EvalReport report = mie::aggregate(counts);
    const double micro_f1 = 2.0 * (10.0 / 14.0) * 0.5 / (10.0 / 14.0 + 0.5);  // 10/17
    const double macro_f1 = (0.8 + 2.0 / 7.0) / 2.0;                          // 19/35
    if (std::abs(report.micro.precision - 10.0 / 14.0) > kTolerance ||
        std::abs(report.micro.recall - 0.5) > kTolerance ||
        std::abs(report.micro.f1 - micro_f1) > kTolerance) {
      problems.push_back("two-site micro metrics off");
    }
    if (std::abs(report.macro.f1 - macro_f1) > kTolerance) {
      problems.push_back("two-site macro F1 off");
    }
  }

  // Hand examples 2 and 3: swept PR curves of one and two annotations.
  const mie::FrameRecord frame{"A", 0, 0, {}};
  const auto box = [](double x, double y) { return mie::BoundingBox(x, y, x + 10, y + 10); };
  {
    const std::vector<mie::Annotation> annotations{{frame, box(0, 0), 0}};
    const std::vector<mie::Detection> detections{{frame, box(100, 100), 0.9, 0},
                                                 {frame, box(0, 0), 0.8, 0}};
    const double ap = mie::average_precision(detections, annotations);
    if (std::abs(ap - 0.5) > kTolerance) {
      problems.push_back("one-annotation AP " + format_double(ap, 6) + " != 0.5");
    }
  }
  {
    const std::vector<mie::Annotation> annotations{{frame, box(0, 0), 0},
                                                   {frame, box(40, 40), 0}};
    const std::vector<mie::Detection> detections{{frame, box(0, 0), 0.9, 0},
                                                 {frame, box(100, 100), 0.8, 0},
                                                 {frame, box(40, 40), 0.7, 0}};
    const double ap = mie::average_precision(detections, annotations);
    if (std::abs(ap - 5.0 / 6.0) > kTolerance) {
      problems.push_back("two-annotation AP " + format_double(ap, 6) + " != 5/6");
    }
  }

  // Randomized instances: greedy vs exhaustive matching, plus identities.
  mie::Rng rng(33550336);
  int worst_gap = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n_det = rng.uniform_int(0, 4);
    const std::size_t n_ann = rng.uniform_int(0, 4);
    const auto random_box = [&]() {
      const double x = 10.0 + rng.uniform(-6.0, 6.0);
      const double y = 10.0 + rng.uniform(-6.0, 6.0);
      return mie::BoundingBox(x, y, x + rng.uniform(8.0, 14.0), y + rng.uniform(8.0, 14.0));
    };
    std::vector<mie::Detection> detections;
    std::vector<mie::Annotation> annotations;
    for (std::size_t i = 0; i < n_det; ++i) {
      detections.push_back({frame, random_box(), rng.next_double(), 0});
    }
    for (std::size_t i = 0; i < n_ann; ++i) annotations.push_back({frame, random_box(), 0});

    const mie::MatchCounts counts = mie::counts_of(mie::match_frame(detections, annotations));
    if (counts.tp + counts.fp != static_cast<std::int64_t>(n_det) ||
        counts.tp + counts.fn != static_cast<std::int64_t>(n_ann)) {
      problems.push_back("count identities broken at trial " + std::to_string(trial));
      break;
    }

    std::vector<std::vector<int>> feasible(n_det);
    for (std::size_t d = 0; d < n_det; ++d) {
      for (std::size_t a = 0; a < n_ann; ++a) {
        if (mie::iou(detections[d].box, annotations[a].box) >= 0.5) {
          feasible[d].push_back(static_cast<int>(a));
        }
      }
    }
    std::vector<bool> used(n_ann, false);
    const int optimum = best_matching(feasible, 0, used);
    worst_gap = std::max(worst_gap, optimum - static_cast<int>(counts.tp));
    if (counts.tp < optimum - 1) {
      problems.push_back("greedy fell " + std::to_string(optimum - counts.tp) +
                         " below optimum at trial " + std::to_string(trial));
      break;
    }
  }

  const double elapsed = seconds_since(start);
  if (!problems.empty()) return {false, problems.front()};
  return {elapsed < 30.0, "3 hand examples exact at 1e-9; 1000 random instances: identities "
                          "hold, greedy within " +
                              std::to_string(worst_gap) + " of optimum; " +
                              format_double(elapsed) + "s < 30s"};
}

// --- C4: enhanced vs plain color detection ------------------------------------

/// Hooks the detector to the enhancement stream and collects detections.
class DetectSink : public mie::EnhanceSink {
 public:
  explicit DetectSink(const mie::DetectorConfig& cfg) : cfg_(cfg) {}

  void write(const mie::FrameRecord& record, const mie::EnhancedFrame& frame) override {
    const auto found = mie::detect(frame, cfg_, record);
    const std::lock_guard<std::mutex> lock(mutex_);
    detections_.insert(detections_.end(), found.begin(), found.end());
  }

  std::vector<mie::Detection> take() { return std::move(detections_); }

 private:
  mie::DetectorConfig cfg_;
  std::mutex mutex_;
  std::vector<mie::Detection> detections_;
};

/// Detector settings for the benchmark scenes, frozen from a sweep over the
/// committed fixtures: insect cores respond near twice the gray contrast
/// (roughly 90+) while single-sided ghosts stay near it (roughly 70-), so a
/// threshold of 80 splits them with margin on both sides even at the
/// noisiest amplitude. The area floor admits the smallest blurred core.
mie::DetectorConfig benchmark_detector() {
  mie::DetectorConfig cfg;
  cfg.threshold = 80;
  cfg.open_radius = 1;
  cfg.min_area = 25.0;
  cfg.max_area = 40000.0;
  cfg.pad = 2.0;
  return cfg;
}

struct SceneOutcome {
  std::vector<mie::Detection> mie_detections;
  std::vector<mie::Detection> color_detections;
  std::vector<mie::Annotation> truth;
};

SceneOutcome run_scene(const mie::SynthConfig& cfg, const mie::DetectorConfig& detector) {
  const mie::SynthResult data = mie::generate(cfg);

  SceneOutcome outcome;
  for (const auto& frame_truth : data.truth) {
    outcome.truth.insert(outcome.truth.end(), frame_truth.begin(), frame_truth.end());
  }

  DetectSink sink(detector);
  mie::SequenceOptions options;
  options.nominal_interval = cfg.interval;
  options.loader = [&](const mie::FrameRecord& record) {
    return data.frames.at(static_cast<std::size_t>(record.sequence_index));
  };
  mie::enhance_sequence(data.records, mie::MieConfig{}, sink, options);
  outcome.mie_detections = sink.take();

  // The baseline sees the same frames without enhancement: its "motion"
  // channel is simply the camera's red plane.
  for (std::size_t k = 0; k < data.frames.size(); ++k) {
    const mie::EnhancedFrame plain{data.frames[k]};
    const auto found = mie::detect(plain, detector, data.records[k]);
    outcome.color_detections.insert(outcome.color_detections.end(), found.begin(), found.end());
  }
  return outcome;
}

Verdict c4_directional_benefit() {
  const auto start = Clock::now();
  const mie::DetectorConfig detector = benchmark_detector();

  std::vector<mie::Detection> mie_detections;
  std::vector<mie::Detection> color_detections;
  std::vector<mie::Annotation> truth;
  std::vector<std::string> sites;
  for (int scene = 0; scene < 10; ++scene) {
    char name[32];
    std::snprintf(name, sizeof(name), "bench_%02d.cfg", scene);
    const mie::SynthConfig cfg =
        mie::load_synth_config(std::filesystem::path(MIE_ACCEPT_FIXTURES) / name);
    SceneOutcome outcome = run_scene(cfg, detector);
    sites.push_back(cfg.site_id);
    mie_detections.insert(mie_detections.end(), outcome.mie_detections.begin(),
                          outcome.mie_detections.end());
    color_detections.insert(color_detections.end(), outcome.color_detections.begin(),
                            outcome.color_detections.end());
    truth.insert(truth.end(), outcome.truth.begin(), outcome.truth.end());
  }

  const double mie_f1 = mie::evaluate_detections(mie_detections, truth, 0.5, sites).micro.f1;
  const double color_f1 = mie::evaluate_detections(color_detections, truth, 0.5, sites).micro.f1;

  const mie::SynthConfig easy_cfg = mie::load_synth_config(MIE_EASY_FIXTURE);
  const SceneOutcome easy = run_scene(easy_cfg, detector);
  const std::vector<std::string> easy_sites{easy_cfg.site_id};
  const double easy_f1 =
      mie::evaluate_detections(easy.mie_detections, easy.truth, 0.5, easy_sites).micro.f1;

  const double elapsed = seconds_since(start);
  const bool pass = mie_f1 - color_f1 >= 0.25 && easy_f1 >= 0.90 && elapsed < 120.0;
  return {pass, "10 scenes x 200 frames: micro F1 " + format_double(mie_f1) + " enhanced vs " +
                    format_double(color_f1) + " plain color (gap >= 0.25); easy scene " +
                    format_double(easy_f1) + " >= 0.90; " + format_double(elapsed) +
                    "s < 120s"};
}

// --- C5: temporal filter trace and properties ---------------------------------

mie::Detection detection_at(std::int64_t t, double cx, double cy, double confidence = 0.9) {
  mie::FrameRecord frame{"A", t, t / 30, {}};
  return {frame, mie::BoundingBox(cx - 5, cy - 5, cx + 5, cy + 5), confidence, 0};
}

Verdict c5_abundance_trace() {
  const auto start = Clock::now();
  std::vector<std::string> problems;

  mie::AbundanceConfig cfg;
  cfg.window = 120;
  cfg.same_position_radius = 30.0;

  // The hand trace: four same-position detections 0/30/60/150 s.
  {
    const std::vector<mie::Detection> detections{detection_at(0, 50, 50),
                                                 detection_at(30, 50, 50),
                                                 detection_at(60, 50, 50),
                                                 detection_at(150, 50, 50)};
    const mie::FilterResult result = mie::temporal_filter(detections, cfg);
    std::vector<std::int64_t> kept;
    for (const auto& d : result.kept) kept.push_back(d.frame.timestamp);
    if (kept != std::vector<std::int64_t>{0, 150} || result.suppressed.size() != 2) {
      problems.push_back("hand trace kept " + std::to_string(kept.size()) + " of 4");
    }
  }

  // Randomized idempotence and monotonicity.
  mie::Rng rng(271828);
  for (int trial = 0; trial < 1000 && problems.empty(); ++trial) {
    std::vector<mie::Detection> detections;
    const int count = static_cast<int>(rng.uniform_int(0, 40));
    std::int64_t t = 0;
    for (int i = 0; i < count; ++i) {
      t += rng.uniform_int(0, 60);
      const double cx = 40.0 + 25.0 * rng.uniform_int(0, 3) + rng.uniform(-4.0, 4.0);
      const double cy = 40.0 + 25.0 * rng.uniform_int(0, 3) + rng.uniform(-4.0, 4.0);
      detections.push_back(detection_at(t, cx, cy, rng.next_double()));
    }

    const mie::FilterResult once = mie::temporal_filter(detections, cfg);
    const mie::FilterResult twice = mie::temporal_filter(once.kept, cfg);
    if (!twice.suppressed.empty()) {
      problems.push_back("filter not idempotent at trial " + std::to_string(trial));
      break;
    }

    std::size_t previous = detections.size() + 1;
    for (const std::int64_t window : {std::int64_t{0}, std::int64_t{60}, std::int64_t{240}}) {
      mie::AbundanceConfig sweep = cfg;
      sweep.window = window;
      const std::size_t kept = mie::temporal_filter(detections, sweep).kept.size();
      if (kept > previous) {
        problems.push_back("kept count grew with the window at trial " + std::to_string(trial));
        break;
      }
      previous = kept;
    }
    previous = detections.size() + 1;
    for (const double radius : {0.0, 10.0, 60.0}) {
      mie::AbundanceConfig sweep = cfg;
      sweep.same_position_radius = radius;
      const std::size_t kept = mie::temporal_filter(detections, sweep).kept.size();
      if (kept > previous) {
        problems.push_back("kept count grew with the radius at trial " + std::to_string(trial));
        break;
      }
      previous = kept;
    }
  }

  const double elapsed = seconds_since(start);
  if (!problems.empty()) return {false, problems.front()};
  return {elapsed < 10.0, "hand trace kept {0, 150}; idempotence and monotonicity held on 1000 "
                          "random inputs; " +
                              format_double(elapsed) + "s < 10s"};
}

// --- C6: dataset statistics at published scale --------------------------------

Verdict c6_dataset_statistics() {
  const auto start = Clock::now();

  struct SiteRow {
    const char* site;
    int week;
    std::int64_t insects;
    std::int64_t images;
    double ratio;
    mie::CameraView view;
    const char* plant;
  };
  const SiteRow rows[] = {
      {"S1-0", 24, 170, 14092, 1.2, mie::CameraView::kTop, "Rocket"},
      {"S1-1", 29, 333, 15120, 2.2, mie::CameraView::kTop, "Clover"},
      {"S2-0", 24, 322, 14066, 2.3, mie::CameraView::kSide, "Mallow"},
      {"S2-1", 26, 411, 14011, 2.9, mie::CameraView::kSide, "Mallow"},
      {"S3-0", 28, 2100, 15120, 13.9, mie::CameraView::kSide, "Clover"},
      {"S4-0", 27, 2319, 15120, 15.3, mie::CameraView::kSide, "Clover"},
      {"S4-1", 30, 701, 15120, 4.6, mie::CameraView::kTop, "Clover"},
  };

  const std::int64_t week24_monday = mie::parse_rfc3339("2020-06-08T00:00:00Z");
  std::vector<mie::SequenceManifest> manifests;
  std::vector<mie::Annotation> annotations;
  for (const SiteRow& row : rows) {
    mie::SequenceManifest manifest;
    manifest.site_id = row.site;
    manifest.view = row.view;
    manifest.plant = row.plant;
    const std::int64_t monday = week24_monday + (row.week - 24) * 7 * 86400;
    manifest.frames.reserve(static_cast<std::size_t>(row.images));
    for (std::int64_t k = 0; k < row.images; ++k) {
      manifest.frames.push_back({row.site, monday + 30 * k, k, {}});
    }
    for (std::int64_t k = 0; k < row.insects; ++k) {
      annotations.push_back(
          {manifest.frames[static_cast<std::size_t>(k)], mie::BoundingBox(0, 0, 8, 8), 0});
    }
    manifests.push_back(std::move(manifest));
  }

  const mie::DatasetStats stats = mie::dataset_stats(manifests, annotations);

  std::vector<std::string> problems;
  double worst = 0.0;
  if (stats.sites.size() != 7) problems.push_back("expected 7 site rows");
  for (std::size_t i = 0; i < stats.sites.size() && problems.empty(); ++i) {
    const mie::SiteStats& site = stats.sites[i];
    const SiteRow& row = rows[i];
    const double diff = std::abs(site.ratio - row.ratio);
    worst = std::max(worst, diff);
    if (site.site_id != row.site || site.images != row.images || site.insects != row.insects) {
      problems.push_back(std::string("counts off for ") + row.site);
    } else if (diff > 0.05) {
      problems.push_back(std::string("ratio off by ") + format_double(diff) + " for " + row.site);
    } else if (site.iso_year != 2020 || site.iso_week != row.week) {
      problems.push_back(std::string("week off for ") + row.site);
    }
  }
  if (stats.total_insects != 6356 || stats.total_images != 102649) {
    problems.push_back("totals are not 6356 / 102649");
  }
  const double average_diff = std::abs(stats.average_ratio - 6.2);
  if (average_diff > 0.05) {
    problems.push_back("average ratio " + format_double(stats.average_ratio) + " not 6.2");
  }

  const double elapsed = seconds_since(start);
  if (!problems.empty()) return {false, problems.front()};
  return {elapsed < 1.0, "7 sites, 6356 insects in 102649 images; worst ratio diff " +
                             format_double(worst) + " pp, average " +
                             format_double(stats.average_ratio) + " vs 6.2; " +
                             format_double(elapsed) + "s < 1s"};
}

// --- C7: camera-day throughput -------------------------------------------------

/// FNV-1a over the three planes.
std::uint64_t frame_hash(const mie::ColorFrame& frame) {
  std::uint64_t hash = 1469598103934665603ull;
  const auto mix = [&hash](const std::vector<std::uint8_t>& plane) {
    for (const std::uint8_t value : plane) {
      hash ^= value;
      hash *= 1099511628211ull;
    }
  };
  mix(frame.r);
  mix(frame.g);
  mix(frame.b);
  return hash;
}

/// Hashes every enhanced frame; optionally also writes it as a PNG.
class HashSink : public mie::EnhanceSink {
 public:
  explicit HashSink(std::filesystem::path out_dir = {}) : out_dir_(std::move(out_dir)) {}

  void write(const mie::FrameRecord& record, const mie::EnhancedFrame& frame) override {
    const std::uint64_t hash = frame_hash(frame.image);
    {
      const std::lock_guard<std::mutex> lock(mutex_);
      hashes_[record.sequence_index] = hash;
    }
    if (!out_dir_.empty()) {
      mie::write_png(frame.image, out_dir_ / (record.path.stem().string() + ".png"));
    }
  }

  const std::map<std::int64_t, std::uint64_t>& hashes() const { return hashes_; }

 private:
  std::filesystem::path out_dir_;
  std::mutex mutex_;
  std::map<std::int64_t, std::uint64_t> hashes_;
};

Verdict c7_throughput() {
  constexpr int kFrames = 2160;  // one 30 s camera-day

  mie::SynthConfig cfg;
  cfg.width = 1920;
  cfg.height = 1080;
  cfg.frame_count = kFrames;
  cfg.interval = 30;
  cfg.site_id = "DAY-0";
  mie::NoiseBackground noise;
  noise.amplitude = 12;
  noise.cell = 16;
  cfg.background = noise;
  cfg.background_jitter = 0.3;
  for (int i = 0; i < 3; ++i) {
    mie::InsectSpec insect;
    insect.radius = 12.0;
    insect.step = 30.0;
    cfg.insects.push_back(insect);
  }

  // Stage the day as JPEG input, the way a camera would deliver it. This
  // setup is not part of the timed budget.
  ScratchDir scratch;
  const std::filesystem::path input_dir = scratch.path() / "day";
  std::filesystem::create_directories(input_dir);
  std::vector<mie::FrameRecord> records;
  records.reserve(kFrames);
  mie::generate_frames(cfg, [&](std::size_t index, const mie::ColorFrame& frame,
                                const mie::FrameRecord& record, const std::vector<mie::Annotation>&) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06zu.jpg", index);
    mie::FrameRecord staged = record;
    staged.path = input_dir / name;
    mie::write_jpeg(frame, staged.path);
    records.push_back(staged);
  });

  // Timed: enhance the whole day with four workers, PNG output to disk.
  const std::filesystem::path out_dir = scratch.path() / "enhanced";
  std::filesystem::create_directories(out_dir);
  HashSink timed_sink(out_dir);
  mie::SequenceOptions timed_options;
  timed_options.worker_count = 4;
  const auto start = Clock::now();
  const mie::SequenceResult timed =
      mie::enhance_sequence(records, mie::MieConfig{}, timed_sink, timed_options);
  const double elapsed = seconds_since(start);

  // Reference: one worker, hashes only. Identical pixels mean identical
  // PNGs, since the encoder settings are fixed.
  HashSink single_sink;
  mie::SequenceOptions single_options;
  single_options.worker_count = 1;
  const mie::SequenceResult single =
      mie::enhance_sequence(records, mie::MieConfig{}, single_sink, single_options);

  const bool complete = timed.frames_written == kFrames && timed.failures.empty() &&
                        single.frames_written == kFrames && single.failures.empty();
  const bool identical = timed_sink.hashes() == single_sink.hashes();
  const bool within_budget = elapsed <= 180.0;
  const unsigned cores = std::thread::hardware_concurrency();
  return {complete && identical && within_budget,
          std::to_string(kFrames) + " 1080p frames enhanced to PNG in " +
              format_double(elapsed, 1) + "s (budget 180s, assumes 4 cores; this host has " +
              std::to_string(cores) + "); 4-worker output " +
              (identical ? "bit-identical" : "DIFFERS") + " vs 1 worker"};
}

// --- driver --------------------------------------------------------------------

struct Criterion {
  int number;
  const char* name;
  Verdict (*run)();
};

Verdict c1_check() { return c1_enhancement_exactness(false); }

constexpr Criterion kCriteria[] = {
    {1, "enhancement exactness", c1_check},
    {2, "static nullity", c2_static_nullity},
    {3, "metric oracle", c3_metric_oracle},
    {4, "directional benefit", c4_directional_benefit},
    {5, "abundance trace", c5_abundance_trace},
    {6, "dataset statistics", c6_dataset_statistics},
    {7, "camera-day throughput", c7_throughput},
};

void print_usage() {
  std::printf(
      "usage: mie_acceptance [--criterion N] [--regen-golden]\n"
      "  --criterion N   run only criterion N (1-7); default runs all\n"
      "  --regen-golden  rewrite the C1 golden image from the reference\n"
      "                  implementation in this binary, then exit\n");
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  bool regen = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
      if (selected < 1 || selected > 7) {
        std::fprintf(stderr, "criterion must be 1-7, got %s\n", argv[i]);
        return 2;
      }
    } else if (arg == "--regen-golden") {
      regen = true;
    } else if (arg == "--help" || arg == "-h") {
      print_usage();
      return 0;
    } else {
      std::fprintf(stderr, "unknown argument %s\n", arg.c_str());
      print_usage();
      return 2;
    }
  }

  if (regen) {
    const Verdict verdict = c1_enhancement_exactness(true);
    std::printf("C1 golden: %s\n", verdict.detail.c_str());
    return verdict.pass ? 0 : 1;
  }

  bool all_pass = true;
  for (const Criterion& criterion : kCriteria) {
    if (selected != 0 && criterion.number != selected) continue;
    Verdict verdict;
    try {
      verdict = criterion.run();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    std::printf("C%d %s: %s (%s)\n", criterion.number, criterion.name,
                verdict.pass ? "PASS" : "FAIL", verdict.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && verdict.pass;
  }
  return all_pass ? 0 : 1;
}
