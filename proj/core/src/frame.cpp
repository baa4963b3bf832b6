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

#include "mie/frame.hpp"

#include <string>

#include "mie/error.hpp"

namespace mie {

namespace {

void check_dims(int width, int height) {
  if (width < 3 || height < 3) {
    throw FrameTooSmall("frame must be at least 3x3, got " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
}

void check_plane(std::size_t actual, std::size_t expected, const char* name) {
  if (actual != expected) {
    throw DimensionMismatch(std::string(name) + " plane has " + std::to_string(actual) +
                            " samples, expected " + std::to_string(expected));
  }
}

}  // namespace

ColorFrame ColorFrame::filled(int width, int height, std::uint8_t cr, std::uint8_t cg,
                              std::uint8_t cb) {
  check_dims(width, height);
  ColorFrame frame;
  frame.width = width;
  frame.height = height;
  const std::size_t n = frame.pixel_count();
  frame.r.assign(n, cr);
  frame.g.assign(n, cg);
  frame.b.assign(n, cb);
  return frame;
}

void ColorFrame::validate() const {
  check_dims(width, height);
  const std::size_t n = pixel_count();
  check_plane(r.size(), n, "red");
  check_plane(g.size(), n, "green");
  check_plane(b.size(), n, "blue");
}

GrayFrame GrayFrame::filled(int width, int height, std::uint8_t value) {
  check_dims(width, height);
  GrayFrame frame;
  frame.width = width;
  frame.height = height;
  frame.samples.assign(frame.pixel_count(), value);
  return frame;
}

void GrayFrame::validate() const {
  check_dims(width, height);
  check_plane(samples.size(), pixel_count(), "gray");
}

void MotionLikelihood::validate() const {
  check_dims(width, height);
  check_plane(samples.size(), pixel_count(), "motion");
}

}  // namespace mie
