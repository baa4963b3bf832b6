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

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mie/frame.hpp"
#include "mie/records.hpp"

namespace mie {

// Motion-informed enhancement of a time-lapse sequence. Each output frame
// packs a three-frame motion likelihood into the red channel of an
// otherwise standard RGB image, so downstream detectors that consume plain
// RGB input pick up temporal information for free:
//
//   red   <- clamp(|gray_k - gray_{k-1}| + |gray_{k+1} - gray_k|, 255)
//   green <- source green, untouched
//   blue  <- round((source blue + source red) / 2)
//
// where gray_k is the blurred grayscale of frame k.

enum class EdgePolicy {
  /// Clamp neighbor indices at sequence ends; output count equals input count.
  kReplicateEdge,
  /// Drop frames without two real neighbors; only interior frames are emitted.
  kSkipEdges,
};

enum class BlurKernel {
  /// Separable binomial kernel (e.g. [1,4,6,4,1]/16 for size 5). Integer
  /// exact, identical on every platform.
  kBinomial,
  /// True Gaussian with configurable sigma.
  kGaussian,
};

struct MieConfig {
  int blur_kernel_size = 5;  // odd, in [3, 25]
  double blur_sigma = 1.1;   // used by BlurKernel::kGaussian
  BlurKernel blur_kernel = BlurKernel::kBinomial;
  std::array<double, 3> grayscale_weights{0.299, 0.587, 0.114};  // r, g, b
  EdgePolicy edge_policy = EdgePolicy::kReplicateEdge;

  /// Throws ConfigInvalid when the kernel size is even or outside [3, 25]
  /// (the binomial weights stay integer exact up to 25), sigma <= 0, or the
  /// weights are negative / do not sum to 1 (tolerance 1e-9).
  void validate() const;
};

/// An RGB frame whose channels carry the enhanced values. The green plane is
/// bit-identical to the source frame's green plane.
struct EnhancedFrame {
  ColorFrame image;
};

/// Luminance (per grayscale_weights, round half up) followed by the
/// configured blur with replicated borders. Output dimensions equal input
/// dimensions. Throws FrameTooSmall when the kernel does not fit.
GrayFrame grayscale_blur(const ColorFrame& frame, const MieConfig& cfg);

/// Per pixel |curr-prev| + |next-curr|, saturating at 255.
/// Throws DimensionMismatch unless all three frames share dimensions.
MotionLikelihood motion_likelihood(const GrayFrame& prev, const GrayFrame& curr,
                                   const GrayFrame& next);

/// Enhances the center frame of a three-frame window.
EnhancedFrame enhance(const ColorFrame& prev, const ColorFrame& curr, const ColorFrame& next,
                      const MieConfig& cfg);

/// Variant reusing already blurred grayscales of the window, for sequence
/// runners that share them between adjacent windows.
EnhancedFrame enhance_with_gray(const ColorFrame& curr, const GrayFrame& prev_gray,
                                const GrayFrame& curr_gray, const GrayFrame& next_gray,
                                const MieConfig& cfg);

/// Receives enhanced frames from the sequence runner. write() may be called
/// from several worker threads in any order; results are labeled by their
/// FrameRecord.
class EnhanceSink {
 public:
  virtual ~EnhanceSink() = default;
  virtual void write(const FrameRecord& record, const EnhancedFrame& frame) = 0;
};

struct FrameFailure {
  FrameRecord record;
  std::string error;
};

struct SequenceResult {
  std::size_t frames_written = 0;
  std::vector<FrameFailure> failures;
};

struct SequenceOptions {
  int worker_count = 0;               // 0 = default_worker_count()
  std::int64_t nominal_interval = 30; // seconds between frames
  /// Loads the pixels for one record; defaults to decode_image(record.path).
  std::function<ColorFrame(const FrameRecord&)> loader;
};

/// Consecutive timestamps further apart than this factor times the nominal
/// interval split the sequence; differencing across such a gap (e.g. the
/// nightly recording pause) would produce spurious global motion. Edges of
/// each segment follow the configured EdgePolicy.
inline constexpr int kGapSplitFactor = 3;

/// Enhances every frame of an ordered sequence using its (k-1, k, k+1)
/// window and streams results to the sink. Frames that fail to load are
/// collected in the failure report without aborting the batch; a failed
/// neighbor is replaced by the center frame (zero contribution to the
/// motion term), mirroring kReplicateEdge. Throws EmptySequence for an
/// empty input and UnsortedInput when sequence_index is not strictly
/// increasing with timestamp.
SequenceResult enhance_sequence(std::span<const FrameRecord> frames, const MieConfig& cfg,
                                EnhanceSink& sink, const SequenceOptions& options = {});

/// Splits [0, n) into runs whose internal timestamp gaps are all at most
/// kGapSplitFactor * nominal_interval. Exposed for tests.
std::vector<std::pair<std::size_t, std::size_t>> split_on_gaps(std::span<const FrameRecord> frames,
                                                               std::int64_t nominal_interval);

}  // namespace mie
