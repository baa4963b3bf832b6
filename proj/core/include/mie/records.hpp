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
#include <string>

#include "mie/geometry.hpp"

namespace mie {

/// Identity of one frame in a time-lapse sequence. Timestamps are Unix
/// seconds (UTC, 1 s resolution); sequence_index is strictly increasing
/// with timestamp within a sequence.
struct FrameRecord {
  std::string site_id;
  std::int64_t timestamp = 0;
  std::int64_t sequence_index = 0;
  std::filesystem::path path;

  /// Key used to pair detections with annotations of the same frame.
  std::string frame_key() const { return site_id + "#" + std::to_string(sequence_index); }
};

struct Annotation {
  FrameRecord frame;
  BoundingBox box;
  int class_id = 0;
};

struct Detection {
  FrameRecord frame;
  BoundingBox box;
  double confidence = 0.0;
  int class_id = 0;
};

}  // namespace mie
