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

#include "mie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mie/error.hpp"

namespace mie {

BoundingBox::BoundingBox(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw ValueOutOfRange("degenerate bounding box (" + std::to_string(x_min) + "," +
                          std::to_string(y_min) + "," + std::to_string(x_max) + "," +
                          std::to_string(y_max) + ")");
  }
}

std::optional<BoundingBox> BoundingBox::clipped(double frame_w, double frame_h) const {
  const double x0 = std::max(x_min_, 0.0);
  const double y0 = std::max(y_min_, 0.0);
  const double x1 = std::min(x_max_, frame_w);
  const double y1 = std::min(y_max_, frame_h);
  if (!(x0 < x1) || !(y0 < y1)) {
    return std::nullopt;
  }
  return BoundingBox(x0, y0, x1, y1);
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double h = std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (w <= 0.0 || h <= 0.0) {
    return 0.0;
  }
  return w * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) {
    return 0.0;
  }
  const double uni = a.area() + b.area() - inter;
  return inter / uni;
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  const double dx = a.center_x() - b.center_x();
  const double dy = a.center_y() - b.center_y();
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace mie
