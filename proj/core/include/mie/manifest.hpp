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

enum class CameraView { kTop, kSide };

std::string to_string(CameraView view);
/// Accepts "Top"/"Side" in any case; throws ConfigInvalid otherwise.
CameraView camera_view_from_string(const std::string& text);

/// One camera's time-lapse sequence plus the site metadata needed for
/// dataset statistics.
struct SequenceManifest {
  std::string site_id;
  CameraView view = CameraView::kTop;
  std::string plant;
  std::int64_t nominal_interval = 30;  // seconds between frames
  std::vector<FrameRecord> frames;     // sorted by timestamp

  /// Throws ConfigInvalid on empty site_id, UnsortedInput on unsorted frames.
  void validate() const;
};

struct ScanOptions {
  std::string site_id = "S0-0";
  CameraView view = CameraView::kTop;
  std::string plant;
  std::int64_t nominal_interval = 30;
  /// Timestamp of counter value 0 for templates without date fields.
  std::int64_t counter_epoch = 0;
};

struct SkippedFile {
  std::filesystem::path path;
  std::string reason;
};

struct ScanResult {
  SequenceManifest manifest;
  std::vector<SkippedFile> skipped;  // non-matching or unparsable files
};

/// Scans the files directly under `root` whose names match `pattern` and
/// builds a chronologically sorted manifest. The pattern is matched against
/// the file name literally, except:
///
///   %Y %m %d %H %M %S  fixed-width timestamp fields (4 digits for %Y,
///                      2 for the rest), e.g. "cam_%Y%m%d_%H%M%S.jpg"
///   %i                 frame counter; timestamp = counter_epoch +
///                      counter * nominal_interval, e.g. "t%i.jpg"
///   %%                 a literal percent sign
///
/// A pattern with date fields must include %Y, %m and %d; missing time
/// fields read as 00. Files that do not match the pattern, or match it with
/// an impossible timestamp, are skipped and reported. Result frames are
/// sorted by timestamp (ties broken by file name); date templates number
/// them 0..n-1, counter templates keep the counter as sequence_index so
/// holes in the numbering stay visible.
/// Throws ConfigInvalid for a malformed pattern, IoError when root is not a
/// directory, EmptySequence when nothing matches.
ScanResult scan_sequence(const std::filesystem::path& root, const std::string& pattern,
                         const ScanOptions& options = {});

/// CSV with header `path,site,view,plant,timestamp` (RFC 3339 timestamps),
/// one row per frame. Reading groups rows by (site, view, plant), sorts
/// each group chronologically, and assigns fresh sequence indices. Errors:
/// MalformedLine, IoError.
std::vector<SequenceManifest> read_manifest_csv(const std::filesystem::path& path);
void write_manifest_csv(std::span<const SequenceManifest> manifests,
                        const std::filesystem::path& path);

}  // namespace mie
