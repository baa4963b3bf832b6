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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "mie/frame.hpp"
#include "mie/image_io.hpp"
#include "mie/records.hpp"

namespace mie {

// Synthetic time-lapse generator with exact ground truth. Sequences are a
// pure function of their config — in particular of its seeds — so fixtures
// referenced by tests reproduce bit-identically on any platform.

using Rgb = std::array<std::uint8_t, 3>;

struct FlatBackground {
  Rgb color{92, 108, 70};
};

/// Smooth per-channel value noise (a fixed field sampled with the drift
/// offset), so consecutive frames differ only by the configured jitter.
struct NoiseBackground {
  std::uint64_t seed = 1;
  int amplitude = 20;   // +/- around base, per channel
  int cell = 16;        // px between noise grid nodes
  Rgb base{92, 108, 70};
};

/// An image file tiled (wrapped) across the frame.
struct TexturedBackground {
  std::filesystem::path image;
};

using Background = std::variant<FlatBackground, NoiseBackground, TexturedBackground>;

/// One rendered insect: an axis-aligned anti-aliased ellipse with semi-axes
/// radius x (radius * aspect), following either explicit waypoints
/// (interpolated linearly across the visible range) or a seeded random
/// walk. Random walks reflect off a margin so the truth box stays in frame.
struct InsectSpec {
  double radius = 4.0;  // >= 2 px
  double aspect = 1.0;  // semi-minor / semi-major, in [0.3, 1.0]
  Rgb color{213, 61, 48};
  std::vector<std::pair<double, double>> waypoints;  // empty: random walk
  double step = 0.0;                                 // random-walk px/frame
  int visible_from = 0;                              // inclusive frame index
  int visible_to = -1;                               // inclusive; -1 = last
};

struct SynthConfig {
  int width = 320;
  int height = 240;
  int frame_count = 10;
  std::int64_t interval = 30;     // seconds between frames
  std::int64_t start_time = 0;    // timestamp of frame 0
  std::string site_id = "synth-0";
  std::string plant = "synthetic";
  Background background;
  double background_jitter = 0.0;  // px/frame of global drift
  std::vector<InsectSpec> insects;
  std::uint64_t seed = 1;

  /// Throws ConfigInvalid: frame too small (< 16 px a side), frame_count or
  /// interval < 1, radius < 2, aspect outside [0.3, 1], waypoints that put
  /// any part of an insect outside the frame, visible range out of bounds.
  void validate() const;
};

struct SynthResult {
  std::vector<ColorFrame> frames;
  std::vector<FrameRecord> records;               // one per frame
  std::vector<std::vector<Annotation>> truth;     // per frame, may be empty
};

/// Called once per frame, in order. The frame and truth references are only
/// valid during the call.
using FrameCallback = std::function<void(std::size_t frame_index, const ColorFrame& frame,
                                         const FrameRecord& record,
                                         const std::vector<Annotation>& truth)>;

/// Renders the sequence one frame at a time, so a camera-day of full-size
/// frames never has to fit in memory at once. Deterministic given the config.
void generate_frames(const SynthConfig& cfg, const FrameCallback& callback);

/// Renders the whole sequence in memory. Deterministic given the config.
SynthResult generate(const SynthConfig& cfg);

/// Renders and writes a self-contained dataset directory: frame_NNNNNN.png,
/// matching frame_NNNNNN.txt truth files, and manifest.csv. The returned
/// records carry the written paths.
SynthResult write_dataset(const SynthConfig& cfg, const std::filesystem::path& directory,
                          const PngEncodeOptions& png = {});

/// Loads a config from a flat `key = value` text file ('#' comments).
/// Insects use indexed keys: `insect.0.radius = 6`. See the repository
/// fixtures for complete examples. Throws ConfigInvalid with file:line
/// context; the result is already validated.
SynthConfig load_synth_config(const std::filesystem::path& path);

}  // namespace mie
