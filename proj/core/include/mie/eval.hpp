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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mie/records.hpp"

namespace mie {

// Detection quality metrics at a single IoU threshold (default 0.5):
// greedy matching per frame, recall/precision/F1 with micro and macro
// aggregation across sites, and single-class average precision.

inline constexpr double kDefaultIouThreshold = 0.5;

/// Outcome of matching one frame. Index pairs refer to the input vectors.
struct MatchResult {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (detection, annotation)
  std::vector<std::size_t> false_positives;                  // unmatched detections
  std::vector<std::size_t> false_negatives;                  // unmatched annotations
};

/// Greedy matching: detections in descending confidence order, each taking
/// the unmatched annotation of highest IoU, provided IoU >= iou_threshold.
/// Ties in confidence are broken by input order, ties in IoU by annotation
/// input order.
MatchResult match_frame(std::span<const Detection> detections,
                        std::span<const Annotation> annotations,
                        double iou_threshold = kDefaultIouThreshold);

struct MatchCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& other);
};

MatchCounts counts_of(const MatchResult& result);

/// All denominator-zero cases evaluate to 0 so empty sites aggregate
/// deterministically.
struct Metrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

Metrics metrics_of(const MatchCounts& counts);

struct SiteReport {
  std::string site_id;
  MatchCounts counts;
  Metrics metrics;
  double ap50 = 0.0;
};

struct EvalReport {
  std::vector<SiteReport> sites;  // ordered by site_id
  Metrics macro;                  // unweighted mean of per-site metrics
  Metrics micro;                  // metrics of the summed counts
  MatchCounts micro_counts;
  double ap50 = 0.0;              // over all sites pooled
};

/// Builds the cross-site report from per-site totals. Throws EmptySequence
/// when `site_counts` is empty. (AP fields stay 0; evaluate_detections
/// fills them.)
EvalReport aggregate(const std::map<std::string, MatchCounts>& site_counts);

enum class ApInterpolation {
  kAllPoint,  // area under the monotone precision envelope
  kElevenPoint,
};

/// Single-class AP at the given IoU threshold: detections are pooled,
/// ranked by descending confidence (ties by input order), and matched
/// greedily per frame in that global order. Throws NoGroundTruth when
/// `annotations` is empty.
double average_precision(std::span<const Detection> detections,
                         std::span<const Annotation> annotations,
                         double iou_threshold = kDefaultIouThreshold,
                         ApInterpolation interpolation = ApInterpolation::kAllPoint);

/// Full evaluation: frames are grouped by FrameRecord::frame_key, matched,
/// aggregated per site (FrameRecord::site_id), with AP per site and pooled.
/// Sites listed in `all_sites` appear in the report even when empty.
EvalReport evaluate_detections(std::span<const Detection> detections,
                               std::span<const Annotation> annotations,
                               double iou_threshold = kDefaultIouThreshold,
                               std::span<const std::string> all_sites = {});

/// CSV rows = sites + macro + micro; columns
/// `site,recall,precision,f1,ap50,tp,fp,fn` (macro/micro leave blank what
/// they do not define). Metrics print with 3 decimals.
std::string format_eval_csv(const EvalReport& report);
void write_eval_csv(const EvalReport& report, const std::filesystem::path& path);

/// Fixed-width table for humans, one line per site plus the two averages.
std::string format_eval_table(const EvalReport& report);

}  // namespace mie
