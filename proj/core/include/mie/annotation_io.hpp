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

#include <filesystem>
#include <vector>

#include "mie/records.hpp"

namespace mie {

// Sidecar text files in the normalized-box convention: one object per line,
// space separated, coordinates relative to the frame size.
//
//   annotations:  class cx cy w h
//   detections:   class cx cy w h confidence
//
// All five box values lie in [0, 1]; confidence lies in [0, 1]. On read,
// boxes are denormalized (x_min = (cx - w/2) * frame_w and so on) and
// clipped to the frame, so objects poking past the border come back as
// their visible part. Blank lines are ignored.

/// Throws MalformedLine (with line number), ValueOutOfRange, IoError.
std::vector<Annotation> read_annotations(const std::filesystem::path& path,
                                         const FrameRecord& frame, double frame_w,
                                         double frame_h);

/// Same, plus ConfidenceOutOfRange. Output is sorted by descending
/// confidence; ties keep file order.
std::vector<Detection> read_detections(const std::filesystem::path& path,
                                       const FrameRecord& frame, double frame_w, double frame_h);

/// Inverse of read_annotations, 6-decimal fixed formatting.
void write_annotations(const std::filesystem::path& path,
                       const std::vector<Annotation>& annotations, double frame_w,
                       double frame_h);

void write_detections(const std::filesystem::path& path, const std::vector<Detection>& detections,
                      double frame_w, double frame_h);

}  // namespace mie
