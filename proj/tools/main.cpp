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

// Command-line front end chaining the pipeline stages: enhance (motion-
// informed enhancement of a time-lapse sequence), detect (blob detector
// over enhanced frames), eval (detections vs annotations), abundance
// (temporal filtering and daily series), synth (fixture generator) and
// stats (dataset-level counts).
//
// Conventions: data goes to stdout or files, progress and diagnostics go
// to stderr. Exit 0 on success, 1 on a pipeline error (with a one-line
// machine-readable summary on stderr), 2 on a usage error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mie/abundance.hpp"
#include "mie/annotation_io.hpp"
#include "mie/detector.hpp"
#include "mie/enhance.hpp"
#include "mie/error.hpp"
#include "mie/eval.hpp"
#include "mie/image_io.hpp"
#include "mie/manifest.hpp"
#include "mie/parallel.hpp"
#include "mie/stats.hpp"
#include "mie/synth.hpp"

namespace {

using json = nlohmann::ordered_json;

/// Raised when a batch finished but some frames failed; carries the tally.
class PartialFailure : public mie::Error {
 public:
  using Error::Error;
};

const char* error_name(const mie::Error& error) {
  if (dynamic_cast<const PartialFailure*>(&error) != nullptr) return "PartialFailure";
  if (dynamic_cast<const mie::FrameTooSmall*>(&error) != nullptr) return "FrameTooSmall";
  if (dynamic_cast<const mie::DimensionMismatch*>(&error) != nullptr) return "DimensionMismatch";
  if (dynamic_cast<const mie::MalformedLine*>(&error) != nullptr) return "MalformedLine";
  if (dynamic_cast<const mie::ValueOutOfRange*>(&error) != nullptr) return "ValueOutOfRange";
  if (dynamic_cast<const mie::ConfidenceOutOfRange*>(&error) != nullptr) {
    return "ConfidenceOutOfRange";
  }
  if (dynamic_cast<const mie::EmptySequence*>(&error) != nullptr) return "EmptySequence";
  if (dynamic_cast<const mie::UnparsableTimestamp*>(&error) != nullptr) {
    return "UnparsableTimestamp";
  }
  if (dynamic_cast<const mie::UnsortedInput*>(&error) != nullptr) return "UnsortedInput";
  if (dynamic_cast<const mie::ConfigInvalid*>(&error) != nullptr) return "ConfigInvalid";
  if (dynamic_cast<const mie::NoGroundTruth*>(&error) != nullptr) return "NoGroundTruth";
  if (dynamic_cast<const mie::IoError*>(&error) != nullptr) return "IoError";
  return "Error";
}

/// Common input selection: an explicit manifest CSV, or a directory scanned
/// with a filename pattern. Exactly one of the two is set (enforced by the
/// option group on each subcommand).
struct InputOptions {
  std::string manifest_csv;
  std::string directory;
  std::string pattern = "frame_%i.png";  // the layout synth/enhance write
  mie::ScanOptions scan;

  std::vector<mie::SequenceManifest> load(bool verbose) const {
    if (!manifest_csv.empty()) return mie::read_manifest_csv(manifest_csv);
    mie::ScanResult result = mie::scan_sequence(directory, pattern, scan);
    if (!result.skipped.empty()) {
      std::cerr << "skipped " << result.skipped.size() << " non-matching file(s) in "
                << directory << "\n";
      if (verbose) {
        for (const mie::SkippedFile& skipped : result.skipped) {
          std::cerr << "  " << skipped.path.string() << ": " << skipped.reason << "\n";
        }
      }
    }
    return {std::move(result.manifest)};
  }
};

void add_input_options(CLI::App* sub, InputOptions* input, bool manifest_only = false) {
  if (manifest_only) {
    sub->add_option("--manifest", input->manifest_csv, "Manifest CSV describing the frames")
        ->required();
    return;
  }
  CLI::Option_group* group = sub->add_option_group("input", "Frame source (exactly one)");
  group->add_option("--manifest", input->manifest_csv, "Manifest CSV describing the frames");
  group->add_option("--in", input->directory, "Directory of frames to scan");
  group->require_option(1);
  sub->add_option("--pattern", input->pattern,
                  "Filename pattern for --in: %Y %m %d %H %M %S date fields, %i frame counter, "
                  "%% literal percent")
      ->capture_default_str();
  sub->add_option("--site", input->scan.site_id, "Site id recorded for scanned frames")
      ->capture_default_str();
  sub->add_option("--interval", input->scan.nominal_interval,
                  "Nominal seconds between frames for scanned sequences")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

/// Per-frame sidecar file (detections or annotations), named by frame stem.
std::filesystem::path sidecar(const std::filesystem::path& dir, const mie::FrameRecord& record) {
  std::string stem = record.path.stem().string();
  if (stem.empty()) stem = "frame_" + std::to_string(record.sequence_index);
  return dir / (stem + ".txt");
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  mie::write_file(out_path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

// --- enhance ---------------------------------------------------------------

/// Streams enhanced frames as PNGs named after their source frames.
/// write() touches only distinct files, so no locking is needed.
class PngDirectorySink : public mie::EnhanceSink {
 public:
  PngDirectorySink(std::filesystem::path dir, const mie::PngEncodeOptions& png)
      : dir_(std::move(dir)), png_(png) {}

  void write(const mie::FrameRecord& record, const mie::EnhancedFrame& frame) override {
    std::string stem = record.path.stem().string();
    if (stem.empty()) stem = "frame_" + std::to_string(record.sequence_index);
    mie::write_png(frame.image, dir_ / (stem + ".png"), png_);
  }

 private:
  std::filesystem::path dir_;
  mie::PngEncodeOptions png_;
};

struct EnhanceArgs {
  InputOptions input;
  std::string out_dir;
  mie::MieConfig mie;
  int workers = 0;
  int png_level = 1;
  bool verbose = false;
};

void run_enhance(const EnhanceArgs& args) {
  args.mie.validate();
  std::filesystem::create_directories(args.out_dir);
  mie::PngEncodeOptions png;
  png.compression_level = args.png_level;
  PngDirectorySink sink(args.out_dir, png);

  std::size_t written = 0;
  std::vector<mie::FrameFailure> failures;
  for (const mie::SequenceManifest& manifest : args.input.load(args.verbose)) {
    mie::SequenceOptions options;
    options.worker_count = args.workers;
    options.nominal_interval = manifest.nominal_interval;
    mie::SequenceResult result = mie::enhance_sequence(manifest.frames, args.mie, sink, options);
    written += result.frames_written;
    failures.insert(failures.end(), result.failures.begin(), result.failures.end());
  }

  std::cerr << "enhanced " << written << " frame(s) into " << args.out_dir << "\n";
  for (const mie::FrameFailure& failure : failures) {
    std::cerr << "  failed: " << failure.record.path.string() << ": " << failure.error << "\n";
  }
  if (!failures.empty()) {
    throw PartialFailure(std::to_string(failures.size()) + " of " +
                         std::to_string(failures.size() + written) + " frames failed to enhance");
  }
}

// --- detect ----------------------------------------------------------------

struct DetectArgs {
  InputOptions input;
  std::string out_dir;
  mie::DetectorConfig detector;
  bool otsu = false;
  int workers = 0;
  bool verbose = false;
};

void run_detect(const DetectArgs& args) {
  mie::DetectorConfig cfg = args.detector;
  if (args.otsu) cfg.threshold_mode = mie::ThresholdMode::kOtsu;
  cfg.validate();
  std::filesystem::create_directories(args.out_dir);

  std::vector<mie::FrameRecord> frames;
  for (mie::SequenceManifest& manifest : args.input.load(args.verbose)) {
    frames.insert(frames.end(), manifest.frames.begin(), manifest.frames.end());
  }

  std::mutex mutex;
  std::size_t total_detections = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // path, error
  mie::parallel_for(frames.size(), args.workers, [&](std::size_t i) {
    const mie::FrameRecord& record = frames[i];
    try {
      mie::EnhancedFrame frame{mie::decode_image(record.path)};
      const std::vector<mie::Detection> detections = mie::detect(frame, cfg, record);
      mie::write_detections(sidecar(args.out_dir, record), detections, frame.image.width,
                            frame.image.height);
      const std::lock_guard<std::mutex> lock(mutex);
      total_detections += detections.size();
    } catch (const mie::Error& e) {
      const std::lock_guard<std::mutex> lock(mutex);
      failures.emplace_back(record.path.string(), e.what());
    }
  });

  std::cerr << "detected " << total_detections << " candidate(s) over "
            << (frames.size() - failures.size()) << " frame(s) into " << args.out_dir << "\n";
  for (const auto& [path, error] : failures) {
    std::cerr << "  failed: " << path << ": " << error << "\n";
  }
  if (!failures.empty()) {
    throw PartialFailure(std::to_string(failures.size()) + " of " +
                         std::to_string(frames.size()) + " frames failed to detect");
  }
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  InputOptions input;
  std::string det_dir;
  std::string ann_dir;
  double iou = mie::kDefaultIouThreshold;
  std::string out_path;
  bool verbose = false;
};

void run_eval(const EvalArgs& args) {
  // Boxes are compared in normalized coordinates: IoU is invariant under
  // per-axis scaling, so image dimensions are never needed here.
  std::vector<mie::Detection> detections;
  std::vector<mie::Annotation> annotations;
  std::vector<std::string> sites;
  for (const mie::SequenceManifest& manifest : args.input.load(args.verbose)) {
    sites.push_back(manifest.site_id);
    for (const mie::FrameRecord& record : manifest.frames) {
      const std::filesystem::path det_path = sidecar(args.det_dir, record);
      const std::filesystem::path ann_path = sidecar(args.ann_dir, record);
      if (std::filesystem::exists(det_path)) {
        const auto frame_dets = mie::read_detections(det_path, record, 1.0, 1.0);
        detections.insert(detections.end(), frame_dets.begin(), frame_dets.end());
      }
      if (std::filesystem::exists(ann_path)) {
        const auto frame_anns = mie::read_annotations(ann_path, record, 1.0, 1.0);
        annotations.insert(annotations.end(), frame_anns.begin(), frame_anns.end());
      }
    }
  }

  const mie::EvalReport report = mie::evaluate_detections(detections, annotations, args.iou, sites);
  std::cerr << "evaluated " << detections.size() << " detection(s) against "
            << annotations.size() << " annotation(s) across " << sites.size() << " site(s)\n";
  if (args.verbose) std::cerr << mie::format_eval_table(report);
  write_output(mie::format_eval_csv(report), args.out_path);
}

// --- abundance -------------------------------------------------------------

struct AbundanceArgs {
  InputOptions input;
  std::string det_dir;
  mie::AbundanceConfig abundance;
  std::string anchor = "kept";
  std::string site_filter;
  std::string out_path;
  std::string svg_path;
  bool verbose = false;
};

void run_abundance(const AbundanceArgs& args) {
  mie::AbundanceConfig cfg = args.abundance;
  cfg.anchor = args.anchor == "any" ? mie::SuppressionAnchor::kAnyPrior
                                    : mie::SuppressionAnchor::kKeptOnly;
  cfg.validate();

  std::vector<mie::Detection> raw;
  std::vector<mie::Detection> kept;
  std::vector<std::int64_t> frame_times;
  for (const mie::SequenceManifest& manifest : args.input.load(args.verbose)) {
    if (!args.site_filter.empty() && manifest.site_id != args.site_filter) continue;
    // The temporal filter is per site: manifests keep frames time-ordered,
    // so reading sidecars in manifest order yields a time-ordered list.
    std::vector<mie::Detection> site_detections;
    for (const mie::FrameRecord& record : manifest.frames) {
      frame_times.push_back(record.timestamp);
      const std::filesystem::path det_path = sidecar(args.det_dir, record);
      if (!std::filesystem::exists(det_path)) continue;
      const auto frame_dets = mie::read_detections(det_path, record, 1.0, 1.0);
      site_detections.insert(site_detections.end(), frame_dets.begin(), frame_dets.end());
    }
    mie::FilterResult filtered = mie::temporal_filter(site_detections, cfg);
    raw.insert(raw.end(), site_detections.begin(), site_detections.end());
    kept.insert(kept.end(), filtered.kept.begin(), filtered.kept.end());
  }

  const mie::AbundanceSeries series = mie::abundance_series(kept, raw, cfg, frame_times);
  std::cerr << "kept " << kept.size() << " of " << raw.size() << " detection(s) over "
            << series.bins.size() << " bin(s)\n";
  if (!args.svg_path.empty()) mie::write_abundance_svg(series, args.svg_path);
  write_output(mie::format_abundance_csv(series), args.out_path);
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;       // <0: keep the config's seed
  int frame_count = 0;          // 0: keep the config's count
  bool verbose = false;
};

void run_synth(const SynthArgs& args) {
  mie::SynthConfig cfg;
  if (!args.config_path.empty()) cfg = mie::load_synth_config(args.config_path);
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (args.frame_count > 0) cfg.frame_count = args.frame_count;
  const mie::SynthResult result = mie::write_dataset(cfg, args.out_dir);
  std::size_t truth_boxes = 0;
  for (const auto& frame_truth : result.truth) truth_boxes += frame_truth.size();
  std::cerr << "wrote " << result.frames.size() << " frame(s), " << truth_boxes
            << " truth box(es) and manifest.csv into " << args.out_dir << "\n";
}

// --- stats -----------------------------------------------------------------

struct StatsArgs {
  InputOptions input;
  std::string ann_dir;
  std::string out_path;
  bool verbose = false;
};

void run_stats(const StatsArgs& args) {
  const std::vector<mie::SequenceManifest> manifests = args.input.load(args.verbose);
  std::vector<mie::Annotation> annotations;
  for (const mie::SequenceManifest& manifest : manifests) {
    for (const mie::FrameRecord& record : manifest.frames) {
      const std::filesystem::path ann_path = sidecar(args.ann_dir, record);
      if (!std::filesystem::exists(ann_path)) continue;
      const auto frame_anns = mie::read_annotations(ann_path, record, 1.0, 1.0);
      annotations.insert(annotations.end(), frame_anns.begin(), frame_anns.end());
    }
  }
  const mie::DatasetStats stats = mie::dataset_stats(manifests, annotations);
  std::cerr << "counted " << stats.total_insects << " insect(s) in " << stats.total_images
            << " image(s) across " << stats.sites.size() << " site(s)\n";
  write_output(mie::format_stats_csv(stats), args.out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motion-informed enhancement pipeline for time-lapse insect detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mie 0.1.0");
  app.set_config("--config", "", "Key-value config file ([section] per subcommand); "
                                 "command-line flags take precedence");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Verbose diagnostics on stderr");

  // enhance
  EnhanceArgs enhance_args;
  CLI::App* enhance = app.add_subcommand("enhance", "Motion-enhance a time-lapse sequence");
  add_input_options(enhance, &enhance_args.input);
  enhance->add_option("--out", enhance_args.out_dir, "Output directory for enhanced PNGs")
      ->required();
  enhance->add_option("--kernel-size", enhance_args.mie.blur_kernel_size,
                      "Blur kernel size (odd, 3-25)")
      ->capture_default_str();
  enhance
      ->add_option("--kernel", enhance_args.mie.blur_kernel, "Blur kernel family")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, mie::BlurKernel>{{"binomial", mie::BlurKernel::kBinomial},
                                                 {"gaussian", mie::BlurKernel::kGaussian}},
          CLI::ignore_case))
      ->default_str("binomial");
  enhance->add_option("--sigma", enhance_args.mie.blur_sigma, "Gaussian sigma (gaussian kernel)")
      ->capture_default_str();
  enhance
      ->add_option("--edge", enhance_args.mie.edge_policy, "Sequence edge handling")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, mie::EdgePolicy>{{"replicate", mie::EdgePolicy::kReplicateEdge},
                                                 {"skip", mie::EdgePolicy::kSkipEdges}},
          CLI::ignore_case))
      ->default_str("replicate");
  enhance->add_option("--workers", enhance_args.workers,
                      "Worker threads (0 = MIE_WORKERS or hardware)")
      ->capture_default_str();
  enhance->add_option("--png-level", enhance_args.png_level, "PNG compression level 0-9")
      ->capture_default_str()
      ->check(CLI::Range(0, 9));
  enhance->callback([&] {
    enhance_args.verbose = verbose;
    run_enhance(enhance_args);
  });

  // detect
  DetectArgs detect_args;
  CLI::App* detect = app.add_subcommand("detect", "Run the blob detector on enhanced frames");
  add_input_options(detect, &detect_args.input);
  detect->add_option("--out", detect_args.out_dir, "Output directory for detection files")
      ->required();
  detect->add_option("--threshold", detect_args.detector.threshold,
                     "Fixed red-channel threshold (1-254)")
      ->capture_default_str();
  detect->add_flag("--otsu", detect_args.otsu, "Pick the threshold per frame with Otsu's method");
  detect->add_option("--open-radius", detect_args.detector.open_radius,
                     "Morphological opening disk radius (0 disables)")
      ->capture_default_str();
  detect->add_option("--min-area", detect_args.detector.min_area, "Minimum component area, px^2")
      ->capture_default_str();
  detect->add_option("--max-area", detect_args.detector.max_area, "Maximum component area, px^2")
      ->capture_default_str();
  detect->add_option("--pad", detect_args.detector.pad, "Padding grown around each box, px")
      ->capture_default_str();
  detect->add_option("--workers", detect_args.workers,
                     "Worker threads (0 = MIE_WORKERS or hardware)")
      ->capture_default_str();
  detect->callback([&] {
    detect_args.verbose = verbose;
    run_detect(detect_args);
  });

  // eval
  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate detections against annotations");
  add_input_options(eval, &eval_args.input, /*manifest_only=*/true);
  eval->add_option("--det", eval_args.det_dir, "Directory of per-frame detection files")
      ->required();
  eval->add_option("--ann", eval_args.ann_dir, "Directory of per-frame annotation files")
      ->required();
  eval->add_option("--iou", eval_args.iou, "IoU threshold a match must exceed")
      ->capture_default_str();
  eval->add_option("--out", eval_args.out_path, "Write the report CSV here instead of stdout");
  eval->callback([&] {
    eval_args.verbose = verbose;
    run_eval(eval_args);
  });

  // abundance
  AbundanceArgs abundance_args;
  CLI::App* abundance =
      app.add_subcommand("abundance", "Temporal filtering and abundance series");
  add_input_options(abundance, &abundance_args.input, /*manifest_only=*/true);
  abundance->add_option("--det", abundance_args.det_dir, "Directory of per-frame detection files")
      ->required();
  abundance->add_option("--window", abundance_args.abundance.window,
                        "Suppression window in seconds (0 disables)")
      ->capture_default_str();
  abundance->add_option("--radius", abundance_args.abundance.same_position_radius,
                        "Same-position radius between box centers")
      ->capture_default_str();
  abundance->add_option("--bin", abundance_args.abundance.bin, "Series bin width in seconds")
      ->capture_default_str();
  abundance->add_option("--anchor", abundance_args.anchor,
                        "Suppression anchors: kept detections only, or any prior detection")
      ->check(CLI::IsMember({"kept", "any"}))
      ->capture_default_str();
  abundance->add_option("--site", abundance_args.site_filter, "Restrict to one site id");
  abundance->add_option("--out", abundance_args.out_path,
                        "Write the series CSV here instead of stdout");
  abundance->add_option("--svg", abundance_args.svg_path, "Also render the series as an SVG");
  abundance->callback([&] {
    abundance_args.verbose = verbose;
    run_abundance(abundance_args);
  });

  // synth
  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset with ground truth");
  synth->add_option("--config", synth_args.config_path, "Synthetic sequence config file");
  synth->add_option("--out", synth_args.out_dir, "Output dataset directory")->required();
  synth->add_option("--seed", synth_args.seed, "Override the config's RNG seed");
  synth->add_option("--frames", synth_args.frame_count, "Override the config's frame count");
  synth->callback([&] {
    synth_args.verbose = verbose;
    run_synth(synth_args);
  });

  // stats
  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Dataset statistics from manifests");
  add_input_options(stats, &stats_args.input, /*manifest_only=*/true);
  stats->add_option("--ann", stats_args.ann_dir, "Directory of per-frame annotation files")
      ->required();
  stats->add_option("--out", stats_args.out_path, "Write the stats CSV here instead of stdout");
  stats->callback([&] {
    stats_args.verbose = verbose;
    run_stats(stats_args);
  });

  // Accept global flags (e.g. -v) after the subcommand name as well.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n"
              << json{{"error", "UsageError"}, {"detail", e.what()}}.dump() << "\n";
    return 2;
  } catch (const mie::Error& e) {
    std::cerr << json{{"error", error_name(e)}, {"detail", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "InternalError"}, {"detail", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
