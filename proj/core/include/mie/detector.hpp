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

#include <cstdint>
#include <vector>

#include "mie/enhance.hpp"
#include "mie/frame.hpp"
#include "mie/records.hpp"

namespace mie {

// Classical blob detector over the enhanced red channel: threshold, open,
// label, filter by area. It stands in for a learned detector so the whole
// pipeline can be exercised and measured without one.

enum class ThresholdMode {
  kFixed,
  /// Otsu's method over the red-channel histogram. Degenerates on frames
  /// that are almost entirely background, which is why it is not the
  /// default: most time-lapse frames contain no insect at all.
  kOtsu,
};

struct DetectorConfig {
  ThresholdMode threshold_mode = ThresholdMode::kFixed;
  int threshold = 40;       // fixed mode; foreground is value >= threshold
  int open_radius = 1;      // disk radius of the morphological opening; 0 disables
  double min_area = 64.0;   // component area bounds in px², inclusive
  double max_area = 40000.0;
  double pad = 2.0;         // grown around each box, then clipped to the frame

  /// Throws ConfigInvalid: fixed threshold outside [1, 254], negative
  /// open_radius or pad, min_area <= 0 or min_area >= max_area.
  void validate() const;
};

/// One 8-connected foreground component. Bounds are half-open pixel
/// coordinates; labels count from 1 in raster-scan order of each
/// component's first pixel.
struct Component {
  int label = 0;
  std::int64_t area = 0;
  std::int64_t intensity_sum = 0;  // sum of source values over the component
  int x_min = 0, y_min = 0;
  int x_max = 0, y_max = 0;  // exclusive
};

/// Labels the nonzero pixels of `mask`. `weights`, when given, must match
/// the mask dimensions and feeds intensity_sum (otherwise the mask itself
/// does).
std::vector<Component> connected_components(const GrayFrame& mask,
                                            const GrayFrame* weights = nullptr);

/// Binary erosion followed by dilation with a disk of the given radius
/// (squared-distance disk; radius 1 is the 4-neighbor cross). Pixels
/// outside the frame count as background.
GrayFrame morphological_open(const GrayFrame& mask, int radius);

/// Otsu's threshold over an 8-bit histogram: the value maximizing
/// between-class variance. Foreground is value > returned threshold.
int otsu_threshold(const GrayFrame& image);

/// Runs the full detector on one enhanced frame. Detections carry `record`,
/// a box padded by cfg.pad and clipped to the frame, and confidence = mean
/// red value of the component / 255. Output follows component label order.
std::vector<Detection> detect(const EnhancedFrame& frame, const DetectorConfig& cfg,
                              const FrameRecord& record = {});

}  // namespace mie
