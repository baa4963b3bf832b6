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
//
// Microbenchmarks for the per-frame hot path. The budget that matters in
// production is one camera-day (2,160 frames at 1920x1080) through the full
// enhancement in a few minutes, i.e. roughly 80 ms per frame end to end;
// these benchmarks break that down per stage at the real frame size.

#include <cstdint>
#include <utility>
#include <vector>

#include <benchmark/benchmark.h>

#include "mie/detector.hpp"
#include "mie/enhance.hpp"
#include "mie/eval.hpp"
#include "mie/frame.hpp"
#include "mie/geometry.hpp"
#include "mie/image_io.hpp"
#include "mie/records.hpp"
#include "mie/rng.hpp"
#include "mie/synth.hpp"

namespace mie {
namespace {

constexpr int kFullWidth = 1920;
constexpr int kFullHeight = 1080;

/// A three-frame window of camera-like frames: smooth noise background with
/// slight drift plus a handful of moving blobs, at full production size.
/// Deterministic, built once and shared across benchmarks.
const SynthResult& camera_window() {
  static const SynthResult result = [] {
    SynthConfig cfg;
    cfg.width = kFullWidth;
    cfg.height = kFullHeight;
    cfg.frame_count = 3;
    cfg.site_id = "bench-0";
    NoiseBackground noise;
    noise.seed = 7;
    noise.amplitude = 12;
    noise.cell = 16;
    cfg.background = noise;
    cfg.background_jitter = 0.3;
    for (int i = 0; i < 4; ++i) {
      InsectSpec insect;
      insect.radius = 9.0;
      insect.color = {60, 35, 30};
      insect.step = 25.0;
      cfg.insects.push_back(insect);
    }
    cfg.seed = 11;
    return generate(cfg);
  }();
  return result;
}

void BM_GrayscaleBlur(benchmark::State& state) {
  const ColorFrame& frame = camera_window().frames[1];
  const MieConfig cfg;
  for (auto _ : state) {
    GrayFrame gray = grayscale_blur(frame, cfg);
    benchmark::DoNotOptimize(gray.samples.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(frame.pixel_count()) * 3);
}
BENCHMARK(BM_GrayscaleBlur)->Unit(benchmark::kMillisecond);

void BM_MotionLikelihood(benchmark::State& state) {
  const SynthResult& window = camera_window();
  const MieConfig cfg;
  const GrayFrame prev = grayscale_blur(window.frames[0], cfg);
  const GrayFrame curr = grayscale_blur(window.frames[1], cfg);
  const GrayFrame next = grayscale_blur(window.frames[2], cfg);
  for (auto _ : state) {
    MotionLikelihood motion = motion_likelihood(prev, curr, next);
    benchmark::DoNotOptimize(motion.samples.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(curr.samples.size()) * 3);
}
BENCHMARK(BM_MotionLikelihood)->Unit(benchmark::kMillisecond);

/// The full window transform as the sequence runner sees it: three frames in,
/// one enhanced frame out. This is the number to divide the per-day budget by.
void BM_Enhance(benchmark::State& state) {
  const SynthResult& window = camera_window();
  const MieConfig cfg;
  for (auto _ : state) {
    EnhancedFrame enhanced = enhance(window.frames[0], window.frames[1], window.frames[2], cfg);
    benchmark::DoNotOptimize(enhanced.image.r.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(window.frames[1].pixel_count()) * 9);
}
BENCHMARK(BM_Enhance)->Unit(benchmark::kMillisecond);

/// Steady-state cost per frame when adjacent windows share their blurred
/// grayscales, as enhance_sequence does: one grayscale_blur plus the fused
/// difference pass, not three.
void BM_EnhanceSteadyState(benchmark::State& state) {
  const SynthResult& window = camera_window();
  const MieConfig cfg;
  const GrayFrame prev = grayscale_blur(window.frames[0], cfg);
  const GrayFrame curr = grayscale_blur(window.frames[1], cfg);
  for (auto _ : state) {
    GrayFrame next = grayscale_blur(window.frames[2], cfg);
    EnhancedFrame enhanced = enhance_with_gray(window.frames[1], prev, curr, next, cfg);
    benchmark::DoNotOptimize(enhanced.image.r.data());
  }
}
BENCHMARK(BM_EnhanceSteadyState)->Unit(benchmark::kMillisecond);

void BM_Detect(benchmark::State& state) {
  const SynthResult& window = camera_window();
  const MieConfig cfg;
  const EnhancedFrame enhanced =
      enhance(window.frames[0], window.frames[1], window.frames[2], cfg);
  DetectorConfig detector;
  detector.threshold = 80;
  detector.min_area = 25.0;
  for (auto _ : state) {
    std::vector<Detection> detections = detect(enhanced, detector, window.records[1]);
    benchmark::DoNotOptimize(detections.data());
  }
}
BENCHMARK(BM_Detect)->Unit(benchmark::kMillisecond);

void BM_EncodePng(benchmark::State& state) {
  const SynthResult& window = camera_window();
  const MieConfig cfg;
  const EnhancedFrame enhanced =
      enhance(window.frames[0], window.frames[1], window.frames[2], cfg);
  PngEncodeOptions options;
  options.compression_level = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::vector<std::uint8_t> bytes = encode_png(enhanced.image, options);
    benchmark::DoNotOptimize(bytes.data());
  }
}
BENCHMARK(BM_EncodePng)->Arg(1)->Arg(6)->Unit(benchmark::kMillisecond);

/// AP over a pool of detections the size of a full evaluated site.
void BM_AveragePrecision(benchmark::State& state) {
  const std::int64_t count = state.range(0);
  Rng rng(97);
  std::vector<Annotation> annotations;
  std::vector<Detection> detections;
  for (std::int64_t i = 0; i < count; ++i) {
    FrameRecord record;
    record.site_id = "bench-0";
    record.sequence_index = static_cast<std::size_t>(i / 4);
    record.timestamp = 30 * static_cast<std::int64_t>(record.sequence_index);
    const double x = rng.uniform(20.0, 1800.0);
    const double y = rng.uniform(20.0, 1000.0);
    annotations.push_back({record, BoundingBox(x, y, x + 16, y + 16), 0});
    const double dx = rng.uniform(-6.0, 6.0);
    const double dy = rng.uniform(-6.0, 6.0);
    detections.push_back(
        {record, BoundingBox(x + dx, y + dy, x + dx + 16, y + dy + 16), rng.uniform(0.2, 1.0), 0});
  }
  for (auto _ : state) {
    double ap = average_precision(detections, annotations);
    benchmark::DoNotOptimize(ap);
  }
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_AveragePrecision)->Arg(1000)->Arg(10000);

}  // namespace
}  // namespace mie

BENCHMARK_MAIN();
