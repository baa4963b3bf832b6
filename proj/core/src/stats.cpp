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

#include "mie/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "csv_util.hpp"
#include "mie/civil_time.hpp"
#include "mie/error.hpp"

namespace mie {

DatasetStats dataset_stats(std::span<const SequenceManifest> manifests,
                           std::span<const Annotation> annotations) {
  struct Accumulator {
    std::int64_t images = 0;
    std::int64_t insects = 0;
    std::int64_t first_timestamp = std::numeric_limits<std::int64_t>::max();
    CameraView view = CameraView::kTop;
    std::string plant;
  };
  std::map<std::string, Accumulator> sites;  // ordered by site_id

  for (const SequenceManifest& manifest : manifests) {
    manifest.validate();
    Accumulator& site = sites[manifest.site_id];
    site.images += static_cast<std::int64_t>(manifest.frames.size());
    site.view = manifest.view;
    site.plant = manifest.plant;
    if (!manifest.frames.empty()) {
      site.first_timestamp = std::min(site.first_timestamp, manifest.frames.front().timestamp);
    }
  }
  for (const Annotation& annotation : annotations) {
    // Annotations for unknown sites still count toward their own site row;
    // a mismatched join should be visible in the output, not dropped.
    ++sites[annotation.frame.site_id].insects;
  }

  DatasetStats stats;
  for (const auto& [site_id, acc] : sites) {
    SiteStats row;
    row.site_id = site_id;
    row.images = acc.images;
    row.insects = acc.insects;
    row.ratio = acc.images > 0 ? 100.0 * static_cast<double>(acc.insects) / acc.images : 0.0;
    row.view = acc.view;
    row.plant = acc.plant;
    if (acc.first_timestamp != std::numeric_limits<std::int64_t>::max()) {
      const IsoWeek week = iso_week(acc.first_timestamp);
      row.iso_year = week.year;
      row.iso_week = week.week;
    }
    stats.total_images += acc.images;
    stats.total_insects += acc.insects;
    stats.sites.push_back(std::move(row));
  }
  stats.average_ratio = stats.total_images > 0
                            ? 100.0 * static_cast<double>(stats.total_insects) / stats.total_images
                            : 0.0;
  return stats;
}

std::string format_stats_csv(const DatasetStats& stats) {
  std::string out = "site,week,insects,images,ratio,view,plant\n";
  char buffer[64];
  for (const SiteStats& site : stats.sites) {
    out += csv::escape(site.site_id);
    if (site.iso_week > 0) {
      std::snprintf(buffer, sizeof(buffer), ",%04d-W%02d", site.iso_year, site.iso_week);
      out += buffer;
    } else {
      out += ",";
    }
    std::snprintf(buffer, sizeof(buffer), ",%lld,%lld,%.1f,", //
                  static_cast<long long>(site.insects), static_cast<long long>(site.images),
                  site.ratio);
    out += buffer;
    out += to_string(site.view);
    out += ",";
    out += csv::escape(site.plant);
    out += "\n";
  }
  std::snprintf(buffer, sizeof(buffer), "Average,,%lld,%lld,%.1f,,\n",
                static_cast<long long>(stats.total_insects),
                static_cast<long long>(stats.total_images), stats.average_ratio);
  out += buffer;
  return out;
}

void write_stats_csv(const DatasetStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << format_stats_csv(stats);
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace mie
