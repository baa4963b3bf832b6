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

#include "mie/detector.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "mie/error.hpp"
#include "mie/geometry.hpp"

namespace mie {
namespace {

/// Offsets (dx, dy) of the disk structuring element of a given radius.
std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
    }
  }
  return offsets;
}

GrayFrame erode_or_dilate(const GrayFrame& mask, const std::vector<std::pair<int, int>>& offsets,
                          bool erode) {
  GrayFrame out;
  out.width = mask.width;
  out.height = mask.height;
  out.samples.assign(mask.pixel_count(), 0);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      bool value = erode;
      for (const auto& [dx, dy] : offsets) {
        const int xx = x + dx;
        const int yy = y + dy;
        // Outside the frame counts as background.
        const bool on = xx >= 0 && xx < mask.width && yy >= 0 && yy < mask.height &&
                        mask.samples[static_cast<std::size_t>(yy) * mask.width + xx] != 0;
        if (erode ? !on : on) {
          value = !erode;
          break;
        }
      }
      out.samples[static_cast<std::size_t>(y) * mask.width + x] = value ? 1 : 0;
    }
  }
  return out;
}

}  // namespace

void DetectorConfig::validate() const {
  if (threshold_mode == ThresholdMode::kFixed && (threshold < 1 || threshold > 254)) {
    throw ConfigInvalid("fixed threshold must be within [1, 254], got " +
                        std::to_string(threshold));
  }
  if (open_radius < 0) {
    throw ConfigInvalid("open_radius must be non-negative, got " + std::to_string(open_radius));
  }
  if (!(min_area > 0.0) || !(min_area < max_area)) {
    throw ConfigInvalid("area bounds must satisfy 0 < min_area < max_area, got [" +
                        std::to_string(min_area) + ", " + std::to_string(max_area) + "]");
  }
  if (pad < 0.0) {
    throw ConfigInvalid("pad must be non-negative, got " + std::to_string(pad));
  }
}

GrayFrame morphological_open(const GrayFrame& mask, int radius) {
  mask.validate();
  if (radius < 0) throw ConfigInvalid("open radius must be non-negative");
  if (radius == 0) return mask;
  const std::vector<std::pair<int, int>> offsets = disk_offsets(radius);
  return erode_or_dilate(erode_or_dilate(mask, offsets, true), offsets, false);
}

int otsu_threshold(const GrayFrame& image) {
  image.validate();
  std::array<std::int64_t, 256> histogram{};
  for (std::uint8_t v : image.samples) ++histogram[v];

  const std::int64_t total = static_cast<std::int64_t>(image.pixel_count());
  std::int64_t weighted_total = 0;
  for (int v = 0; v < 256; ++v) weighted_total += std::int64_t{v} * histogram[v];

  std::int64_t background_count = 0;
  std::int64_t background_sum = 0;
  double best_variance = -1.0;
  int best_threshold = 0;
  for (int t = 0; t < 256; ++t) {
    background_count += histogram[t];
    if (background_count == 0) continue;
    const std::int64_t foreground_count = total - background_count;
    if (foreground_count == 0) break;
    background_sum += std::int64_t{t} * histogram[t];
    const double mean_background = static_cast<double>(background_sum) / background_count;
    const double mean_foreground =
        static_cast<double>(weighted_total - background_sum) / foreground_count;
    const double delta = mean_background - mean_foreground;
    const double variance = static_cast<double>(background_count) *
                            static_cast<double>(foreground_count) * delta * delta;
    if (variance > best_variance) {
      best_variance = variance;
      best_threshold = t;
    }
  }
  return best_threshold;
}

std::vector<Component> connected_components(const GrayFrame& mask, const GrayFrame* weights) {
  mask.validate();
  if (weights != nullptr && !same_dimensions(mask, *weights)) {
    throw DimensionMismatch("connected_components: weights dimensions do not match mask");
  }

  const int width = mask.width;
  const int height = mask.height;
  std::vector<std::int32_t> labels(mask.pixel_count(), 0);
  std::vector<Component> components;
  std::vector<std::int32_t> stack;

  for (int y0 = 0; y0 < height; ++y0) {
    for (int x0 = 0; x0 < width; ++x0) {
      const std::size_t start = static_cast<std::size_t>(y0) * width + x0;
      if (mask.samples[start] == 0 || labels[start] != 0) continue;

      Component component;
      component.label = static_cast<int>(components.size()) + 1;
      component.x_min = component.x_max = x0;
      component.y_min = component.y_max = y0;

      labels[start] = component.label;
      stack.clear();
      stack.push_back(static_cast<std::int32_t>(start));
      while (!stack.empty()) {
        const std::int32_t index = stack.back();
        stack.pop_back();
        const int x = index % width;
        const int y = index / width;
        ++component.area;
        component.intensity_sum +=
            weights != nullptr ? weights->samples[index] : mask.samples[index];
        component.x_min = std::min(component.x_min, x);
        component.x_max = std::max(component.x_max, x);
        component.y_min = std::min(component.y_min, y);
        component.y_max = std::max(component.y_max, y);

        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int xx = x + dx;
            const int yy = y + dy;
            if (xx < 0 || xx >= width || yy < 0 || yy >= height) continue;
            const std::size_t neighbor = static_cast<std::size_t>(yy) * width + xx;
            if (mask.samples[neighbor] == 0 || labels[neighbor] != 0) continue;
            labels[neighbor] = component.label;
            stack.push_back(static_cast<std::int32_t>(neighbor));
          }
        }
      }

      // Make the stored bounds half-open.
      ++component.x_max;
      ++component.y_max;
      components.push_back(component);
    }
  }
  return components;
}

std::vector<Detection> detect(const EnhancedFrame& frame, const DetectorConfig& cfg,
                              const FrameRecord& record) {
  cfg.validate();
  frame.image.validate();

  GrayFrame red;
  red.width = frame.image.width;
  red.height = frame.image.height;
  red.samples = frame.image.r;

  int threshold = cfg.threshold;
  if (cfg.threshold_mode == ThresholdMode::kOtsu) {
    threshold = otsu_threshold(red) + 1;  // foreground is strictly above Otsu's split
  }

  GrayFrame mask;
  mask.width = red.width;
  mask.height = red.height;
  mask.samples.resize(red.pixel_count());
  for (std::size_t i = 0; i < mask.samples.size(); ++i) {
    mask.samples[i] = red.samples[i] >= threshold ? 1 : 0;
  }
  mask = morphological_open(mask, cfg.open_radius);

  std::vector<Detection> detections;
  for (const Component& component : connected_components(mask, &red)) {
    const double area = static_cast<double>(component.area);
    if (area < cfg.min_area || area > cfg.max_area) continue;

    const BoundingBox padded(component.x_min - cfg.pad, component.y_min - cfg.pad,
                             component.x_max + cfg.pad, component.y_max + cfg.pad);
    const auto clipped = padded.clipped(red.width, red.height);
    if (!clipped.has_value()) continue;  // unreachable: components lie in-frame

    const double confidence = static_cast<double>(component.intensity_sum) / (area * 255.0);
    detections.push_back(Detection{record, *clipped, confidence, 0});
  }
  return detections;
}

}  // namespace mie
