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

#include <optional>

namespace mie {

/// Axis-aligned box in continuous pixel coordinates, half-open, origin
/// top-left with x rightward and y downward. Sub-pixel coordinates are
/// allowed; degenerate boxes are rejected at construction.
class BoundingBox {
 public:
  /// Throws ValueOutOfRange unless x_min < x_max and y_min < y_max.
  BoundingBox(double x_min, double y_min, double x_max, double y_max);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }

  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x_min_ + x_max_); }
  double center_y() const { return 0.5 * (y_min_ + y_max_); }

  /// Intersection with [0,frame_w)x[0,frame_h); empty optional when disjoint.
  std::optional<BoundingBox> clipped(double frame_w, double frame_h) const;

  bool operator==(const BoundingBox& other) const = default;

 private:
  double x_min_;
  double y_min_;
  double x_max_;
  double y_max_;
};

/// Intersection area of two boxes; 0 when disjoint.
double intersection_area(const BoundingBox& a, const BoundingBox& b);

/// Intersection over union, in [0,1]. Symmetric, 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Euclidean distance between box centers.
double center_distance(const BoundingBox& a, const BoundingBox& b);

}  // namespace mie
