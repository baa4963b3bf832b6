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

#include "mie/enhance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "mie/error.hpp"
#include "mie/image_io.hpp"
#include "mie/parallel.hpp"

namespace mie {
namespace {

constexpr int kMinKernelSize = 3;
constexpr int kMaxKernelSize = 25;

/// Row of Pascal's triangle with `size` entries; the classic integer
/// approximation of a Gaussian. Sum is 2^(size-1).
std::vector<std::uint32_t> binomial_kernel(int size) {
  std::vector<std::uint32_t> coeff(static_cast<std::size_t>(size), 1);
  for (int row = 1; row < size; ++row) {
    for (int i = row - 1; i > 0; --i) coeff[i] += coeff[i - 1];
  }
  return coeff;
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> coeff(static_cast<std::size_t>(size));
  const int radius = size / 2;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double x = i - radius;
    coeff[i] = std::exp(-(x * x) / (2.0 * sigma * sigma));
    sum += coeff[i];
  }
  for (double& c : coeff) c /= sum;
  return coeff;
}

/// Separable integer convolution with replicated borders. The horizontal
/// pass keeps raw weighted sums (max 255 * 2^(size-1), which fits u32 for
/// size <= 25); the vertical pass accumulates in u64 and applies the single
/// round-half-up division by the full 2-D kernel sum.
void blur_binomial(const std::vector<std::uint8_t>& src, int width, int height,
                   const std::vector<std::uint32_t>& coeff, std::vector<std::uint8_t>& dst) {
  const int size = static_cast<int>(coeff.size());
  const int radius = size / 2;
  const std::uint64_t row_sum = std::uint64_t{1} << (size - 1);
  const std::uint64_t total = row_sum * row_sum;
  const std::uint64_t half = total / 2;

  std::vector<std::uint32_t> tmp(src.size());
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* in = src.data() + static_cast<std::size_t>(y) * width;
    std::uint32_t* out = tmp.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < radius; ++x) {
      std::uint32_t acc = 0;
      for (int t = 0; t < size; ++t) acc += coeff[t] * in[std::max(x + t - radius, 0)];
      out[x] = acc;
    }
    for (int x = radius; x < width - radius; ++x) {
      std::uint32_t acc = 0;
      for (int t = 0; t < size; ++t) acc += coeff[t] * in[x + t - radius];
      out[x] = acc;
    }
    for (int x = std::max(width - radius, radius); x < width; ++x) {
      std::uint32_t acc = 0;
      for (int t = 0; t < size; ++t) acc += coeff[t] * in[std::min(x + t - radius, width - 1)];
      out[x] = acc;
    }
  }

  for (int y = 0; y < height; ++y) {
    const std::uint32_t* rows[kMaxKernelSize];
    for (int t = 0; t < size; ++t) {
      const int yy = std::clamp(y + t - radius, 0, height - 1);
      rows[t] = tmp.data() + static_cast<std::size_t>(yy) * width;
    }
    std::uint8_t* out = dst.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      std::uint64_t acc = 0;
      for (int t = 0; t < size; ++t) acc += std::uint64_t{coeff[t]} * rows[t][x];
      out[x] = static_cast<std::uint8_t>((acc + half) / total);
    }
  }
}

/// Same structure in doubles for the true-Gaussian kernel; rounds half up.
void blur_gaussian(const std::vector<std::uint8_t>& src, int width, int height,
                   const std::vector<double>& coeff, std::vector<std::uint8_t>& dst) {
  const int size = static_cast<int>(coeff.size());
  const int radius = size / 2;

  std::vector<double> tmp(src.size());
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* in = src.data() + static_cast<std::size_t>(y) * width;
    double* out = tmp.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int t = 0; t < size; ++t) {
        acc += coeff[t] * in[std::clamp(x + t - radius, 0, width - 1)];
      }
      out[x] = acc;
    }
  }

  for (int y = 0; y < height; ++y) {
    const double* rows[kMaxKernelSize];
    for (int t = 0; t < size; ++t) {
      const int yy = std::clamp(y + t - radius, 0, height - 1);
      rows[t] = tmp.data() + static_cast<std::size_t>(yy) * width;
    }
    std::uint8_t* out = dst.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (int t = 0; t < size; ++t) acc += coeff[t] * rows[t][x];
      out[x] = static_cast<std::uint8_t>(std::clamp(std::floor(acc + 0.5), 0.0, 255.0));
    }
  }
}

void require_same_dimensions(const GrayFrame& a, const GrayFrame& b, const char* what) {
  if (!same_dimensions(a, b)) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width) + "x" +
                            std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                            std::to_string(b.height));
  }
}

void require_same_dimensions(const ColorFrame& a, const ColorFrame& b, const char* what) {
  if (!same_dimensions(a, b)) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width) + "x" +
                            std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                            std::to_string(b.height));
  }
}

}  // namespace

void MieConfig::validate() const {
  if (blur_kernel_size < kMinKernelSize || blur_kernel_size > kMaxKernelSize ||
      blur_kernel_size % 2 == 0) {
    throw ConfigInvalid("blur_kernel_size must be odd and within [" +
                        std::to_string(kMinKernelSize) + ", " + std::to_string(kMaxKernelSize) +
                        "], got " + std::to_string(blur_kernel_size));
  }
  if (blur_kernel == BlurKernel::kGaussian && !(blur_sigma > 0.0)) {
    throw ConfigInvalid("blur_sigma must be positive, got " + std::to_string(blur_sigma));
  }
  double sum = 0.0;
  for (double w : grayscale_weights) {
    if (w < 0.0) throw ConfigInvalid("grayscale_weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigInvalid("grayscale_weights must sum to 1, got " + std::to_string(sum));
  }
}

GrayFrame grayscale_blur(const ColorFrame& frame, const MieConfig& cfg) {
  cfg.validate();
  frame.validate();
  if (frame.width < cfg.blur_kernel_size || frame.height < cfg.blur_kernel_size) {
    throw FrameTooSmall("frame " + std::to_string(frame.width) + "x" +
                        std::to_string(frame.height) + " cannot hold a " +
                        std::to_string(cfg.blur_kernel_size) + "-tap kernel");
  }

  // Luminance, round half up. Per-channel lookup tables keep the weighted
  // sum a fixed chain of three double additions, identical on every run.
  double lut_r[256], lut_g[256], lut_b[256];
  for (int v = 0; v < 256; ++v) {
    lut_r[v] = cfg.grayscale_weights[0] * v;
    lut_g[v] = cfg.grayscale_weights[1] * v;
    lut_b[v] = cfg.grayscale_weights[2] * v;
  }
  GrayFrame gray;
  gray.width = frame.width;
  gray.height = frame.height;
  gray.samples.resize(frame.pixel_count());
  for (std::size_t i = 0; i < gray.samples.size(); ++i) {
    const double lum = lut_r[frame.r[i]] + lut_g[frame.g[i]] + lut_b[frame.b[i]];
    gray.samples[i] = static_cast<std::uint8_t>(lum + 0.5);
  }

  GrayFrame blurred;
  blurred.width = gray.width;
  blurred.height = gray.height;
  blurred.samples.resize(gray.samples.size());
  if (cfg.blur_kernel == BlurKernel::kBinomial) {
    blur_binomial(gray.samples, gray.width, gray.height, binomial_kernel(cfg.blur_kernel_size),
                  blurred.samples);
  } else {
    blur_gaussian(gray.samples, gray.width, gray.height,
                  gaussian_kernel(cfg.blur_kernel_size, cfg.blur_sigma), blurred.samples);
  }
  return blurred;
}

MotionLikelihood motion_likelihood(const GrayFrame& prev, const GrayFrame& curr,
                                   const GrayFrame& next) {
  curr.validate();
  require_same_dimensions(prev, curr, "motion_likelihood prev/curr");
  require_same_dimensions(next, curr, "motion_likelihood next/curr");

  MotionLikelihood out;
  out.width = curr.width;
  out.height = curr.height;
  out.samples.resize(curr.pixel_count());
  const std::uint8_t* p = prev.samples.data();
  const std::uint8_t* c = curr.samples.data();
  const std::uint8_t* n = next.samples.data();
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const int d = std::abs(int{c[i]} - int{p[i]}) + std::abs(int{n[i]} - int{c[i]});
    out.samples[i] = static_cast<std::uint8_t>(std::min(d, 255));
  }
  return out;
}

EnhancedFrame enhance_with_gray(const ColorFrame& curr, const GrayFrame& prev_gray,
                                const GrayFrame& curr_gray, const GrayFrame& next_gray,
                                const MieConfig& cfg) {
  cfg.validate();
  curr.validate();
  const MotionLikelihood motion = motion_likelihood(prev_gray, curr_gray, next_gray);
  if (motion.width != curr.width || motion.height != curr.height) {
    throw DimensionMismatch("enhance: grayscale frames do not match the color frame");
  }

  EnhancedFrame out;
  out.image.width = curr.width;
  out.image.height = curr.height;
  out.image.r = motion.samples;
  out.image.g = curr.g;
  out.image.b.resize(curr.pixel_count());
  for (std::size_t i = 0; i < out.image.b.size(); ++i) {
    // round(0.5*b + 0.5*r) in integers; +1 makes the halves round up.
    out.image.b[i] = static_cast<std::uint8_t>((int{curr.b[i]} + int{curr.r[i]} + 1) >> 1);
  }
  return out;
}

EnhancedFrame enhance(const ColorFrame& prev, const ColorFrame& curr, const ColorFrame& next,
                      const MieConfig& cfg) {
  require_same_dimensions(prev, curr, "enhance prev/curr");
  require_same_dimensions(next, curr, "enhance next/curr");
  return enhance_with_gray(curr, grayscale_blur(prev, cfg), grayscale_blur(curr, cfg),
                           grayscale_blur(next, cfg), cfg);
}

std::vector<std::pair<std::size_t, std::size_t>> split_on_gaps(std::span<const FrameRecord> frames,
                                                               std::int64_t nominal_interval) {
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  const std::int64_t max_gap = kGapSplitFactor * nominal_interval;
  std::size_t begin = 0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].timestamp - frames[i - 1].timestamp > max_gap) {
      segments.emplace_back(begin, i);
      begin = i;
    }
  }
  if (!frames.empty()) segments.emplace_back(begin, frames.size());
  return segments;
}

namespace {

/// One enhancement job: the segment-local window (prev, self, next) of the
/// frame at `center`, with neighbor indices already clamped per the edge
/// policy and gap splits.
struct Window {
  std::size_t prev;
  std::size_t center;
  std::size_t next;
};

}  // namespace

SequenceResult enhance_sequence(std::span<const FrameRecord> frames, const MieConfig& cfg,
                                EnhanceSink& sink, const SequenceOptions& options) {
  cfg.validate();
  if (frames.empty()) throw EmptySequence("enhance_sequence: no frames");
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].timestamp < frames[i - 1].timestamp ||
        frames[i].sequence_index <= frames[i - 1].sequence_index) {
      throw UnsortedInput("enhance_sequence: frames out of order at position " +
                          std::to_string(i) + " (" + frames[i].path.string() + ")");
    }
  }
  if (options.nominal_interval <= 0) {
    throw ConfigInvalid("nominal_interval must be positive, got " +
                        std::to_string(options.nominal_interval));
  }

  const auto loader = options.loader ? options.loader : [](const FrameRecord& record) {
    return decode_image(record.path);
  };

  std::vector<Window> windows;
  windows.reserve(frames.size());
  for (const auto& [begin, end] : split_on_gaps(frames, options.nominal_interval)) {
    if (cfg.edge_policy == EdgePolicy::kReplicateEdge) {
      for (std::size_t k = begin; k < end; ++k) {
        windows.push_back({k == begin ? k : k - 1, k, k + 1 == end ? k : k + 1});
      }
    } else {
      for (std::size_t k = begin + 1; k + 1 < end; ++k) {
        windows.push_back({k - 1, k, k + 1});
      }
    }
  }

  // Workers claim contiguous runs of windows. Within a run, the color frame
  // and grayscale of frame k+1 roll over to the next window, so each frame
  // is decoded once per run touching it (at most twice overall across run
  // boundaries). Run length scales with the input so a single worker pays
  // almost no boundary overhead.
  const int workers =
      options.worker_count > 0 ? options.worker_count : default_worker_count();
  const std::size_t run_length =
      std::max<std::size_t>(16, windows.size() / (static_cast<std::size_t>(workers) * 8) + 1);
  const std::size_t run_count = (windows.size() + run_length - 1) / run_length;

  std::mutex mutex;  // guards result and the sink
  SequenceResult result;
  std::map<std::int64_t, std::string> failures;  // sequence_index -> first error

  parallel_for(run_count, workers, [&](std::size_t run) {
    const std::size_t first = run * run_length;
    const std::size_t last = std::min(first + run_length, windows.size());

    // Rolling three-entry cache of decoded frames, keyed by frame index.
    // Entries own their pixels through shared_ptr so eviction cannot pull
    // data out from under a window still holding it.
    struct CachedFrame {
      std::size_t index = 0;
      std::shared_ptr<const ColorFrame> color;  // null when the load failed
      std::shared_ptr<const GrayFrame> gray;
      std::string error;
    };
    std::array<CachedFrame, 3> cache;
    int cache_fill = 0;
    std::map<std::size_t, std::string> local_failures;

    auto load = [&](std::size_t index) -> CachedFrame {
      for (int i = 0; i < cache_fill; ++i) {
        if (cache[i].color != nullptr && cache[i].index == index) return cache[i];
      }
      CachedFrame entry;
      entry.index = index;
      try {
        auto color = std::make_shared<const ColorFrame>(loader(frames[index]));
        entry.gray = std::make_shared<const GrayFrame>(grayscale_blur(*color, cfg));
        entry.color = std::move(color);
      } catch (const std::exception& e) {
        entry.error = e.what();
        return entry;  // failures are not cached; a retry as center re-reports
      }
      if (cache_fill == 3) {
        cache[0] = std::move(cache[1]);
        cache[1] = std::move(cache[2]);
        cache_fill = 2;
      }
      cache[cache_fill] = entry;
      ++cache_fill;
      return entry;
    };

    for (std::size_t w = first; w < last; ++w) {
      const Window& window = windows[w];
      const CachedFrame center = load(window.center);
      if (center.color == nullptr) {
        local_failures.emplace(window.center, center.error);
        continue;
      }

      // A broken or misfitting neighbor degrades this window to the
      // ReplicateEdge behavior on that side: the center substitutes for it
      // and contributes zero motion.
      auto neighbor_gray = [&](std::size_t index) -> std::shared_ptr<const GrayFrame> {
        if (index == window.center) return center.gray;
        const CachedFrame neighbor = load(index);
        if (neighbor.gray == nullptr) {
          local_failures.emplace(index, neighbor.error);
          return center.gray;
        }
        if (!same_dimensions(*neighbor.gray, *center.gray)) {
          local_failures.emplace(index, "neighbor dimensions " +
                                            std::to_string(neighbor.gray->width) + "x" +
                                            std::to_string(neighbor.gray->height) +
                                            " do not match frame");
          return center.gray;
        }
        return neighbor.gray;
      };

      EnhancedFrame enhanced = enhance_with_gray(*center.color, *neighbor_gray(window.prev),
                                                 *center.gray, *neighbor_gray(window.next), cfg);

      std::lock_guard<std::mutex> lock(mutex);
      sink.write(frames[window.center], enhanced);
      ++result.frames_written;
    }

    if (!local_failures.empty()) {
      std::lock_guard<std::mutex> lock(mutex);
      for (const auto& [index, error] : local_failures) {
        failures.emplace(frames[index].sequence_index, error);
      }
    }
  });

  // One report entry per distinct frame, ordered by position — independent
  // of worker scheduling. (A frame used by several windows fails once.)
  for (const auto& [sequence_index, error] : failures) {
    const auto it =
        std::find_if(frames.begin(), frames.end(), [&, seq = sequence_index](const FrameRecord& f) {
          return f.sequence_index == seq;
        });
    result.failures.push_back({*it, error});
  }
  return result;
}

}  // namespace mie
