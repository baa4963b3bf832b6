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

#include "mie/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "csv_util.hpp"
#include "mie/error.hpp"
#include "mie/geometry.hpp"

namespace mie {
namespace {

/// Indices 0..n-1 ordered by descending confidence, ties by input order.
std::vector<std::size_t> confidence_order(std::span<const Detection> detections) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });
  return order;
}

char* append_metric(char* out, const char* end, double value) {
  const int written = std::snprintf(out, end - out, ",%.3f", value);
  return out + written;
}

}  // namespace

MatchCounts& MatchCounts::operator+=(const MatchCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

MatchCounts counts_of(const MatchResult& result) {
  return {static_cast<std::int64_t>(result.matches.size()),
          static_cast<std::int64_t>(result.false_positives.size()),
          static_cast<std::int64_t>(result.false_negatives.size())};
}

Metrics metrics_of(const MatchCounts& counts) {
  Metrics metrics;
  if (counts.tp + counts.fn > 0) {
    metrics.recall = static_cast<double>(counts.tp) / (counts.tp + counts.fn);
  }
  if (counts.tp + counts.fp > 0) {
    metrics.precision = static_cast<double>(counts.tp) / (counts.tp + counts.fp);
  }
  if (metrics.precision + metrics.recall > 0.0) {
    metrics.f1 =
        2.0 * metrics.precision * metrics.recall / (metrics.precision + metrics.recall);
  }
  return metrics;
}

MatchResult match_frame(std::span<const Detection> detections,
                        std::span<const Annotation> annotations, double iou_threshold) {
  MatchResult result;
  std::vector<bool> annotation_taken(annotations.size(), false);

  for (std::size_t det : confidence_order(detections)) {
    double best_iou = 0.0;
    std::size_t best_annotation = annotations.size();
    for (std::size_t ann = 0; ann < annotations.size(); ++ann) {
      if (annotation_taken[ann]) continue;
      const double overlap = iou(detections[det].box, annotations[ann].box);
      if (overlap > best_iou) {  // strict: IoU ties keep the earlier annotation
        best_iou = overlap;
        best_annotation = ann;
      }
    }
    // best_annotation is only set on strictly positive overlap, so a zero
    // threshold still demands an actual intersection.
    if (best_annotation < annotations.size() && best_iou >= iou_threshold) {
      annotation_taken[best_annotation] = true;
      result.matches.emplace_back(det, best_annotation);
    } else {
      result.false_positives.push_back(det);
    }
  }
  for (std::size_t ann = 0; ann < annotations.size(); ++ann) {
    if (!annotation_taken[ann]) result.false_negatives.push_back(ann);
  }
  std::sort(result.false_positives.begin(), result.false_positives.end());
  return result;
}

EvalReport aggregate(const std::map<std::string, MatchCounts>& site_counts) {
  if (site_counts.empty()) throw EmptySequence("aggregate: no sites");

  EvalReport report;
  for (const auto& [site_id, counts] : site_counts) {
    SiteReport site;
    site.site_id = site_id;
    site.counts = counts;
    site.metrics = metrics_of(counts);
    report.micro_counts += counts;
    report.macro.recall += site.metrics.recall;
    report.macro.precision += site.metrics.precision;
    report.macro.f1 += site.metrics.f1;
    report.sites.push_back(std::move(site));
  }
  const double site_count = static_cast<double>(report.sites.size());
  report.macro.recall /= site_count;
  report.macro.precision /= site_count;
  report.macro.f1 /= site_count;
  report.micro = metrics_of(report.micro_counts);
  return report;
}

double average_precision(std::span<const Detection> detections,
                         std::span<const Annotation> annotations, double iou_threshold,
                         ApInterpolation interpolation) {
  if (annotations.empty()) throw NoGroundTruth("average_precision: no annotations");

  // Ground truth per frame, with taken-flags for the global greedy sweep.
  std::map<std::string, std::vector<std::size_t>> frame_annotations;
  for (std::size_t ann = 0; ann < annotations.size(); ++ann) {
    frame_annotations[annotations[ann].frame.frame_key()].push_back(ann);
  }
  std::vector<bool> annotation_taken(annotations.size(), false);

  std::vector<double> precision;
  std::vector<double> recall;
  precision.reserve(detections.size());
  recall.reserve(detections.size());
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  const double total = static_cast<double>(annotations.size());

  for (std::size_t det : confidence_order(detections)) {
    double best_iou = 0.0;
    std::size_t best_annotation = annotations.size();
    const auto frame = frame_annotations.find(detections[det].frame.frame_key());
    if (frame != frame_annotations.end()) {
      for (std::size_t ann : frame->second) {
        if (annotation_taken[ann]) continue;
        const double overlap = iou(detections[det].box, annotations[ann].box);
        if (overlap > best_iou) {
          best_iou = overlap;
          best_annotation = ann;
        }
      }
    }
    if (best_annotation < annotations.size() && best_iou >= iou_threshold) {
      annotation_taken[best_annotation] = true;
      ++tp;
    } else {
      ++fp;
    }
    precision.push_back(static_cast<double>(tp) / (tp + fp));
    recall.push_back(static_cast<double>(tp) / total);
  }

  if (precision.empty()) return 0.0;

  // Monotone envelope: precision becomes non-increasing along recall.
  for (std::size_t i = precision.size() - 1; i-- > 0;) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }

  if (interpolation == ApInterpolation::kElevenPoint) {
    double sum = 0.0;
    for (int step = 0; step <= 10; ++step) {
      const double target = step / 10.0;
      double best = 0.0;
      for (std::size_t i = 0; i < recall.size(); ++i) {
        if (recall[i] >= target - 1e-12) {
          best = precision[i];
          break;  // envelope is non-increasing; the first point is maximal
        }
      }
      sum += best;
    }
    return sum / 11.0;
  }

  double area = 0.0;
  double previous_recall = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    area += (recall[i] - previous_recall) * precision[i];
    previous_recall = recall[i];
  }
  return area;
}

EvalReport evaluate_detections(std::span<const Detection> detections,
                               std::span<const Annotation> annotations, double iou_threshold,
                               std::span<const std::string> all_sites) {
  struct FrameData {
    std::vector<Detection> detections;
    std::vector<Annotation> annotations;
    std::string site_id;
  };
  std::map<std::string, FrameData> frames;
  for (const Detection& detection : detections) {
    FrameData& frame = frames[detection.frame.frame_key()];
    frame.detections.push_back(detection);
    frame.site_id = detection.frame.site_id;
  }
  for (const Annotation& annotation : annotations) {
    FrameData& frame = frames[annotation.frame.frame_key()];
    frame.annotations.push_back(annotation);
    frame.site_id = annotation.frame.site_id;
  }

  std::map<std::string, MatchCounts> site_counts;
  for (const std::string& site : all_sites) site_counts[site];
  for (const auto& [key, frame] : frames) {
    site_counts[frame.site_id] +=
        counts_of(match_frame(frame.detections, frame.annotations, iou_threshold));
  }

  EvalReport report = aggregate(site_counts);

  // AP per site and pooled. Sites without ground truth stay at 0.
  std::map<std::string, std::vector<Detection>> site_detections;
  std::map<std::string, std::vector<Annotation>> site_annotations;
  for (const Detection& detection : detections) {
    site_detections[detection.frame.site_id].push_back(detection);
  }
  for (const Annotation& annotation : annotations) {
    site_annotations[annotation.frame.site_id].push_back(annotation);
  }
  for (SiteReport& site : report.sites) {
    const auto ann = site_annotations.find(site.site_id);
    if (ann == site_annotations.end()) continue;
    const auto det = site_detections.find(site.site_id);
    site.ap50 = average_precision(
        det != site_detections.end() ? std::span<const Detection>(det->second)
                                     : std::span<const Detection>(),
        ann->second, iou_threshold);
  }
  if (!annotations.empty()) {
    report.ap50 = average_precision(detections, annotations, iou_threshold);
  }
  return report;
}

std::string format_eval_csv(const EvalReport& report) {
  std::string out = "site,recall,precision,f1,ap50,tp,fp,fn\n";
  char buffer[256];
  for (const SiteReport& site : report.sites) {
    char* cursor = buffer;
    char* const end = buffer + sizeof(buffer);
    cursor = append_metric(cursor, end, site.metrics.recall);
    cursor = append_metric(cursor, end, site.metrics.precision);
    cursor = append_metric(cursor, end, site.metrics.f1);
    cursor = append_metric(cursor, end, site.ap50);
    std::snprintf(cursor, end - cursor, ",%lld,%lld,%lld",
                  static_cast<long long>(site.counts.tp), static_cast<long long>(site.counts.fp),
                  static_cast<long long>(site.counts.fn));
    out += csv::escape(site.site_id);
    out += buffer;
    out += "\n";
  }
  std::snprintf(buffer, sizeof(buffer), "macro,%.3f,%.3f,%.3f,,,,\n", report.macro.recall,
                report.macro.precision, report.macro.f1);
  out += buffer;
  std::snprintf(buffer, sizeof(buffer), "micro,%.3f,%.3f,%.3f,%.3f,%lld,%lld,%lld\n",
                report.micro.recall, report.micro.precision, report.micro.f1, report.ap50,
                static_cast<long long>(report.micro_counts.tp),
                static_cast<long long>(report.micro_counts.fp),
                static_cast<long long>(report.micro_counts.fn));
  out += buffer;
  return out;
}

void write_eval_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << format_eval_csv(report);
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string format_eval_table(const EvalReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %7s %10s %7s %7s %7s %7s %7s\n", "site", "recall",
                "precision", "f1", "ap50", "tp", "fp", "fn");
  out += line;
  for (const SiteReport& site : report.sites) {
    std::snprintf(line, sizeof(line), "%-12s %7.3f %10.3f %7.3f %7.3f %7lld %7lld %7lld\n",
                  site.site_id.c_str(), site.metrics.recall, site.metrics.precision,
                  site.metrics.f1, site.ap50, static_cast<long long>(site.counts.tp),
                  static_cast<long long>(site.counts.fp),
                  static_cast<long long>(site.counts.fn));
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-12s %7.3f %10.3f %7.3f\n", "macro", report.macro.recall,
                report.macro.precision, report.macro.f1);
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %7.3f %10.3f %7.3f %7.3f %7lld %7lld %7lld\n", "micro",
                report.micro.recall, report.micro.precision, report.micro.f1, report.ap50,
                static_cast<long long>(report.micro_counts.tp),
                static_cast<long long>(report.micro_counts.fp),
                static_cast<long long>(report.micro_counts.fn));
  out += line;
  return out;
}

}  // namespace mie
