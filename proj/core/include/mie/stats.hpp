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

#include "mie/manifest.hpp"
#include "mie/records.hpp"

namespace mie {

/// Per-camera dataset statistics: image count, annotated insect count, and
/// their percentage ratio.
struct SiteStats {
  std::string site_id;
  int iso_year = 0;  // ISO week-year of the site's first frame
  int iso_week = 0;
  std::int64_t images = 0;
  std::int64_t insects = 0;
  double ratio = 0.0;  // 100 * insects / images; 0 when images == 0
  CameraView view = CameraView::kTop;
  std::string plant;
};

struct DatasetStats {
  std::vector<SiteStats> sites;  // ordered by site_id
  std::int64_t total_images = 0;
  std::int64_t total_insects = 0;
  /// Ratio of the summed counts, not the mean of per-site ratios.
  double average_ratio = 0.0;
};

/// Counts images per site from the manifests and insects per site from the
/// annotations (joined on site_id). Manifests sharing a site_id merge; the
/// week column comes from the earliest frame.
DatasetStats dataset_stats(std::span<const SequenceManifest> manifests,
                           std::span<const Annotation> annotations);

/// CSV with header `site,week,insects,images,ratio,view,plant`; one row per
/// site plus a trailing `Average` row carrying the totals. Ratios are
/// printed with one decimal; the week column is `YYYY-Www`.
std::string format_stats_csv(const DatasetStats& stats);
void write_stats_csv(const DatasetStats& stats, const std::filesystem::path& path);

}  // namespace mie
