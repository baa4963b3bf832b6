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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mie/records.hpp"

namespace mie {

// Abundance estimation from per-frame detections. An insect sitting still
// is detected in frame after frame; the temporal filter collapses such
// runs so one visit counts once per window.

enum class SuppressionAnchor {
  /// Only detections that were themselves kept suppress later ones, so a
  /// continuously present insect is re-counted once per window.
  kKeptOnly,
  /// Any prior detection suppresses, so an unbroken presence counts once.
  kAnyPrior,
};

struct AbundanceConfig {
  std::int64_t window = 120;          // seconds; 0 disables suppression
  double same_position_radius = 30.0; // px between box centers
  std::int64_t bin = 86400;           // series bin width in seconds
  SuppressionAnchor anchor = SuppressionAnchor::kKeptOnly;

  /// Throws ConfigInvalid when window < 0, radius < 0, or bin <= 0.
  void validate() const;
};

struct FilterResult {
  std::vector<Detection> kept;
  std::vector<Detection> suppressed;
};

/// Scans detections in time order. A detection is suppressed iff an anchor
/// detection exists with a strictly newer-than `timestamp - window`
/// timestamp (dt < window) whose box center lies within
/// same_position_radius. Ties at one timestamp are processed in descending
/// confidence. Throws UnsortedInput unless timestamps are non-decreasing.
FilterResult temporal_filter(std::span<const Detection> detections, const AbundanceConfig& cfg);

struct AbundanceBin {
  std::int64_t bin_start = 0;  // Unix seconds, inclusive
  std::int64_t raw = 0;
  std::int64_t filtered = 0;
  /// True when no frame was recorded in this bin (a camera outage, not an
  /// absence of insects). Only derivable when frame times are supplied.
  bool no_data = false;

  /// Raw exceeding filtered this much (ratio > 3) usually indicates a
  /// stationary false prediction being re-suppressed all day.
  bool high_suppression() const { return filtered > 0 ? raw > 3 * filtered : raw > 3; }
};

struct AbundanceSeries {
  std::vector<AbundanceBin> bins;  // contiguous, covering first..last event
};

/// Bins both detection streams into cfg.bin-wide intervals aligned to
/// multiples of cfg.bin. Bins between the first and last event with no raw
/// detection count 0; when `frame_times` is given, bins containing no
/// frame at all are flagged no_data. Both lists must be time-ordered
/// (UnsortedInput).
AbundanceSeries abundance_series(std::span<const Detection> kept, std::span<const Detection> raw,
                                 const AbundanceConfig& cfg,
                                 std::span<const std::int64_t> frame_times = {});

/// CSV `bin_start,raw,filtered,no_data` with RFC 3339 bin starts.
std::string format_abundance_csv(const AbundanceSeries& series);
void write_abundance_csv(const AbundanceSeries& series, const std::filesystem::path& path);

/// Self-contained SVG line chart of the two series: red = raw,
/// green = filtered. No-data bins are shaded.
std::string render_abundance_svg(const AbundanceSeries& series, int width = 960,
                                 int height = 320);
void write_abundance_svg(const AbundanceSeries& series, const std::filesystem::path& path,
                         int width = 960, int height = 320);

}  // namespace mie
