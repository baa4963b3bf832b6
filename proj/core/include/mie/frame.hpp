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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mie {

// Frames are stored planar: one contiguous row-major 8-bit plane per channel.
// Pixel (x, y) of plane p is p[y * width + x], origin top-left.

struct ColorFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> r;
  std::vector<std::uint8_t> g;
  std::vector<std::uint8_t> b;

  static ColorFrame filled(int width, int height, std::uint8_t cr, std::uint8_t cg,
                           std::uint8_t cb);

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

  /// Throws FrameTooSmall / DimensionMismatch when the invariants do not hold:
  /// width and height at least 3, all three planes exactly width*height samples.
  void validate() const;
};

struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  static GrayFrame filled(int width, int height, std::uint8_t value);

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  void validate() const;
};

/// Per-pixel motion likelihood, same dimensions as the source frames.
struct MotionLikelihood {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  void validate() const;
};

inline bool same_dimensions(const ColorFrame& a, const ColorFrame& b) {
  return a.width == b.width && a.height == b.height;
}

inline bool same_dimensions(const GrayFrame& a, const GrayFrame& b) {
  return a.width == b.width && a.height == b.height;
}

}  // namespace mie
