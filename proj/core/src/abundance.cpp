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

#include "mie/abundance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>

#include "mie/civil_time.hpp"
#include "mie/error.hpp"
#include "mie/geometry.hpp"

namespace mie {
namespace {

void require_time_ordered(std::span<const Detection> detections, const char* what) {
  for (std::size_t i = 1; i < detections.size(); ++i) {
    if (detections[i].frame.timestamp < detections[i - 1].frame.timestamp) {
      throw UnsortedInput(std::string(what) + ": detections out of time order at position " +
                          std::to_string(i));
    }
  }
}

std::int64_t floor_div(std::int64_t value, std::int64_t divisor) {
  std::int64_t quotient = value / divisor;
  if ((value % divisor != 0) && ((value < 0) != (divisor < 0))) --quotient;
  return quotient;
}

}  // namespace

void AbundanceConfig::validate() const {
  if (window < 0) {
    throw ConfigInvalid("window must be non-negative, got " + std::to_string(window));
  }
  if (same_position_radius < 0.0) {
    throw ConfigInvalid("same_position_radius must be non-negative, got " +
                        std::to_string(same_position_radius));
  }
  if (bin <= 0) throw ConfigInvalid("bin must be positive, got " + std::to_string(bin));
}

FilterResult temporal_filter(std::span<const Detection> detections, const AbundanceConfig& cfg) {
  cfg.validate();
  require_time_ordered(detections, "temporal_filter");

  // Equal timestamps are processed in descending confidence so the most
  // confident duplicate becomes the survivor.
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (detections[a].frame.timestamp != detections[b].frame.timestamp) {
      return detections[a].frame.timestamp < detections[b].frame.timestamp;
    }
    return detections[a].confidence > detections[b].confidence;
  });

  struct Anchor {
    std::int64_t timestamp;
    double cx;
    double cy;
  };
  std::deque<Anchor> anchors;

  FilterResult result;
  const double radius_squared = cfg.same_position_radius * cfg.same_position_radius;
  for (std::size_t index : order) {
    const Detection& detection = detections[index];
    const std::int64_t now = detection.frame.timestamp;
    while (!anchors.empty() && now - anchors.front().timestamp >= cfg.window) {
      anchors.pop_front();  // dt must stay strictly below the window
    }

    const double cx = detection.box.center_x();
    const double cy = detection.box.center_y();
    const bool suppressed =
        std::any_of(anchors.begin(), anchors.end(), [&](const Anchor& anchor) {
          const double dx = anchor.cx - cx;
          const double dy = anchor.cy - cy;
          return dx * dx + dy * dy <= radius_squared;
        });

    if (suppressed) {
      result.suppressed.push_back(detection);
      if (cfg.anchor == SuppressionAnchor::kAnyPrior) anchors.push_back({now, cx, cy});
    } else {
      result.kept.push_back(detection);
      anchors.push_back({now, cx, cy});
    }
  }
  return result;
}

AbundanceSeries abundance_series(std::span<const Detection> kept, std::span<const Detection> raw,
                                 const AbundanceConfig& cfg,
                                 std::span<const std::int64_t> frame_times) {
  cfg.validate();
  require_time_ordered(kept, "abundance_series kept");
  require_time_ordered(raw, "abundance_series raw");
  for (std::size_t i = 1; i < frame_times.size(); ++i) {
    if (frame_times[i] < frame_times[i - 1]) {
      throw UnsortedInput("abundance_series: frame times out of order at position " +
                          std::to_string(i));
    }
  }

  AbundanceSeries series;
  if (kept.empty() && raw.empty() && frame_times.empty()) return series;

  std::int64_t first = std::numeric_limits<std::int64_t>::max();
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  const auto cover = [&](std::int64_t t) {
    first = std::min(first, t);
    last = std::max(last, t);
  };
  if (!kept.empty()) cover(kept.front().frame.timestamp), cover(kept.back().frame.timestamp);
  if (!raw.empty()) cover(raw.front().frame.timestamp), cover(raw.back().frame.timestamp);
  if (!frame_times.empty()) cover(frame_times.front()), cover(frame_times.back());

  const std::int64_t first_bin = floor_div(first, cfg.bin);
  const std::int64_t last_bin = floor_div(last, cfg.bin);
  series.bins.resize(static_cast<std::size_t>(last_bin - first_bin + 1));
  for (std::size_t i = 0; i < series.bins.size(); ++i) {
    series.bins[i].bin_start = (first_bin + static_cast<std::int64_t>(i)) * cfg.bin;
    series.bins[i].no_data = !frame_times.empty();
  }

  const auto bin_of = [&](std::int64_t t) {
    return static_cast<std::size_t>(floor_div(t, cfg.bin) - first_bin);
  };
  for (const Detection& detection : raw) ++series.bins[bin_of(detection.frame.timestamp)].raw;
  for (const Detection& detection : kept) {
    ++series.bins[bin_of(detection.frame.timestamp)].filtered;
  }
  for (std::int64_t t : frame_times) series.bins[bin_of(t)].no_data = false;
  return series;
}

std::string format_abundance_csv(const AbundanceSeries& series) {
  std::string out = "bin_start,raw,filtered,no_data\n";
  char buffer[96];
  for (const AbundanceBin& bin : series.bins) {
    std::snprintf(buffer, sizeof(buffer), ",%lld,%lld,%d\n", static_cast<long long>(bin.raw),
                  static_cast<long long>(bin.filtered), bin.no_data ? 1 : 0);
    out += format_rfc3339(bin.bin_start);
    out += buffer;
  }
  return out;
}

void write_abundance_csv(const AbundanceSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << format_abundance_csv(series);
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string render_abundance_svg(const AbundanceSeries& series, int width, int height) {
  if (width < 160 || height < 120) {
    throw ConfigInvalid("svg canvas must be at least 160x120");
  }
  const int margin_left = 56;
  const int margin_right = 16;
  const int margin_top = 24;
  const int margin_bottom = 40;
  const double plot_w = width - margin_left - margin_right;
  const double plot_h = height - margin_top - margin_bottom;

  std::int64_t y_max = 1;
  for (const AbundanceBin& bin : series.bins) y_max = std::max({y_max, bin.raw, bin.filtered});

  const std::size_t n = series.bins.size();
  const auto x_of = [&](std::size_t i) {
    const double f = n > 1 ? static_cast<double>(i) / (n - 1) : 0.5;
    return margin_left + f * plot_w;
  };
  const auto y_of = [&](std::int64_t value) {
    return margin_top + plot_h * (1.0 - static_cast<double>(value) / y_max);
  };

  char buffer[256];
  std::string svg;
  std::snprintf(buffer, sizeof(buffer),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                width, height, width, height);
  svg += buffer;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Shade camera outages so flat-zero stretches are not read as absence.
  const double half_step = n > 1 ? plot_w / (n - 1) / 2.0 : plot_w / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!series.bins[i].no_data) continue;
    std::snprintf(buffer, sizeof(buffer),
                  "<rect x=\"%.1f\" y=\"%d\" width=\"%.1f\" height=\"%.1f\" "
                  "fill=\"#dddddd\"/>\n",
                  x_of(i) - half_step, margin_top, 2.0 * half_step, plot_h);
    svg += buffer;
  }

  std::snprintf(buffer, sizeof(buffer),
                "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" stroke=\"black\"/>\n"
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%.1f\" stroke=\"black\"/>\n",
                margin_left, margin_top + plot_h, width - margin_right, margin_top + plot_h,
                margin_left, margin_top, margin_left, margin_top + plot_h);
  svg += buffer;

  const auto polyline = [&](const char* color, auto value_of) {
    std::string points;
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buffer, sizeof(buffer), "%s%.1f,%.1f", i == 0 ? "" : " ", x_of(i),
                    y_of(value_of(series.bins[i])));
      points += buffer;
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  };
  if (n > 0) {
    svg += polyline("#d62728", [](const AbundanceBin& bin) { return bin.raw; });       // red
    svg += polyline("#2ca02c", [](const AbundanceBin& bin) { return bin.filtered; });  // green
  }

  // Y extremes, first/last bin labels, legend.
  std::snprintf(buffer, sizeof(buffer),
                "<text x=\"%d\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%lld</text>\n"
                "<text x=\"%d\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">0</text>\n",
                margin_left - 6, margin_top + 4.0, static_cast<long long>(y_max), margin_left - 6,
                margin_top + plot_h + 4.0);
  svg += buffer;
  if (n > 0) {
    std::snprintf(buffer, sizeof(buffer),
                  "<text x=\"%d\" y=\"%d\" font-size=\"11\">%s</text>\n"
                  "<text x=\"%d\" y=\"%d\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                  margin_left, height - 12,
                  format_rfc3339(series.bins.front().bin_start).c_str(), width - margin_right,
                  height - 12, format_rfc3339(series.bins.back().bin_start).c_str());
    svg += buffer;
  }
  std::snprintf(buffer, sizeof(buffer),
                "<text x=\"%d\" y=\"16\" font-size=\"11\" fill=\"#d62728\">raw</text>\n"
                "<text x=\"%d\" y=\"16\" font-size=\"11\" fill=\"#2ca02c\">filtered</text>\n",
                margin_left, margin_left + 40);
  svg += buffer;
  svg += "</svg>\n";
  return svg;
}

void write_abundance_svg(const AbundanceSeries& series, const std::filesystem::path& path,
                         int width, int height) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << render_abundance_svg(series, width, height);
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace mie
