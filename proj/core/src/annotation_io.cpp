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

#include "mie/annotation_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "mie/error.hpp"

namespace mie {
namespace {

struct ParsedLine {
  int class_id = 0;
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double confidence = 0.0;  // only with expect_confidence
};

/// Parses one `class cx cy w h [confidence]` line and range-checks it.
ParsedLine parse_line(const std::string& line, const std::string& file, int line_number,
                      bool expect_confidence) {
  std::istringstream in(line);
  ParsedLine parsed;
  if (!(in >> parsed.class_id >> parsed.cx >> parsed.cy >> parsed.w >> parsed.h)) {
    throw MalformedLine(file, line_number, "expected `class cx cy w h`, got \"" + line + "\"");
  }
  if (expect_confidence && !(in >> parsed.confidence)) {
    throw MalformedLine(file, line_number, "missing confidence column in \"" + line + "\"");
  }
  std::string extra;
  if (in >> extra) {
    throw MalformedLine(file, line_number, "unexpected trailing field \"" + extra + "\"");
  }
  if (parsed.class_id < 0) {
    throw MalformedLine(file, line_number,
                        "class must be non-negative, got " + std::to_string(parsed.class_id));
  }
  const double values[] = {parsed.cx, parsed.cy, parsed.w, parsed.h};
  const char* names[] = {"cx", "cy", "w", "h"};
  for (int i = 0; i < 4; ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      std::ostringstream message;
      message << file << ":" << line_number << ": " << names[i] << " = " << values[i]
              << " outside [0, 1]";
      throw ValueOutOfRange(message.str());
    }
  }
  if (expect_confidence && !(parsed.confidence >= 0.0 && parsed.confidence <= 1.0)) {
    std::ostringstream message;
    message << file << ":" << line_number << ": confidence = " << parsed.confidence
            << " outside [0, 1]";
    throw ConfidenceOutOfRange(message.str());
  }
  return parsed;
}

/// Denormalizes to pixels and clips to the frame. Empty when the box has no
/// visible part (possible only for degenerate zero-extent inputs, which the
/// BoundingBox constructor rejects first).
BoundingBox denormalize(const ParsedLine& parsed, double frame_w, double frame_h,
                        const std::string& file, int line_number) {
  const BoundingBox raw((parsed.cx - parsed.w / 2.0) * frame_w,
                        (parsed.cy - parsed.h / 2.0) * frame_h,
                        (parsed.cx + parsed.w / 2.0) * frame_w,
                        (parsed.cy + parsed.h / 2.0) * frame_h);
  std::optional<BoundingBox> clipped = raw.clipped(frame_w, frame_h);
  if (!clipped.has_value()) {
    throw ValueOutOfRange(file + ":" + std::to_string(line_number) +
                          ": box lies entirely outside the frame");
  }
  return *clipped;
}

std::ifstream open_for_reading(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  return in;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

void format_box(std::ostream& out, const BoundingBox& box, double frame_w, double frame_h) {
  const auto normalized = [](double v) { return std::clamp(v, 0.0, 1.0); };
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), " %.6f %.6f %.6f %.6f",
                normalized(box.center_x() / frame_w), normalized(box.center_y() / frame_h),
                normalized(box.width() / frame_w), normalized(box.height() / frame_h));
  out << buffer;
}

void require_frame_size(double frame_w, double frame_h) {
  if (!(frame_w > 0.0) || !(frame_h > 0.0)) {
    throw ValueOutOfRange("frame size must be positive, got " + std::to_string(frame_w) + "x" +
                          std::to_string(frame_h));
  }
}

}  // namespace

std::vector<Annotation> read_annotations(const std::filesystem::path& path,
                                         const FrameRecord& frame, double frame_w,
                                         double frame_h) {
  require_frame_size(frame_w, frame_h);
  std::ifstream in = open_for_reading(path);
  std::vector<Annotation> annotations;
  std::string line;
  for (int line_number = 1; std::getline(in, line); ++line_number) {
    if (is_blank(line)) continue;
    const ParsedLine parsed = parse_line(line, path.string(), line_number, false);
    annotations.push_back(
        {frame, denormalize(parsed, frame_w, frame_h, path.string(), line_number),
         parsed.class_id});
  }
  return annotations;
}

std::vector<Detection> read_detections(const std::filesystem::path& path,
                                       const FrameRecord& frame, double frame_w, double frame_h) {
  require_frame_size(frame_w, frame_h);
  std::ifstream in = open_for_reading(path);
  std::vector<Detection> detections;
  std::string line;
  for (int line_number = 1; std::getline(in, line); ++line_number) {
    if (is_blank(line)) continue;
    const ParsedLine parsed = parse_line(line, path.string(), line_number, true);
    detections.push_back({frame,
                          denormalize(parsed, frame_w, frame_h, path.string(), line_number),
                          parsed.confidence, parsed.class_id});
  }
  std::stable_sort(detections.begin(), detections.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.confidence > b.confidence;
                   });
  return detections;
}

void write_annotations(const std::filesystem::path& path,
                       const std::vector<Annotation>& annotations, double frame_w,
                       double frame_h) {
  require_frame_size(frame_w, frame_h);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  for (const Annotation& annotation : annotations) {
    out << annotation.class_id;
    format_box(out, annotation.box, frame_w, frame_h);
    out << "\n";
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

void write_detections(const std::filesystem::path& path, const std::vector<Detection>& detections,
                      double frame_w, double frame_h) {
  require_frame_size(frame_w, frame_h);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  for (const Detection& detection : detections) {
    out << detection.class_id;
    format_box(out, detection.box, frame_w, frame_h);
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), " %.6f", detection.confidence);
    out << buffer << "\n";
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace mie
