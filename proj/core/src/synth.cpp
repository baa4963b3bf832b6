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

#include "mie/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mie/annotation_io.hpp"
#include "mie/civil_time.hpp"
#include "mie/error.hpp"
#include "mie/manifest.hpp"
#include "mie/rng.hpp"

namespace mie {
namespace {

constexpr std::uint64_t kDriftStream = 0xD21F;
constexpr std::uint64_t kInsectStreamBase = 0x1A5EC7;

/// One splitmix-style scramble to derive independent per-purpose seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double hash_unit(std::uint64_t seed, std::uint64_t x, std::uint64_t y, std::uint64_t c) {
  return static_cast<double>(mix_seed(mix_seed(mix_seed(seed, x), y), c) >> 11) * 0x1.0p-53;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

/// Seamless (toroidal) smooth value noise, one plane per channel.
ColorFrame make_noise_field(int width, int height, const NoiseBackground& bg) {
  const int cell = std::max(1, bg.cell);
  const int grid_w = std::max(1, (width + cell - 1) / cell);
  const int grid_h = std::max(1, (height + cell - 1) / cell);
  const auto node = [&](int gx, int gy, int c) {
    return hash_unit(bg.seed, static_cast<std::uint64_t>(gx % grid_w),
                     static_cast<std::uint64_t>(gy % grid_h), static_cast<std::uint64_t>(c));
  };

  ColorFrame field;
  field.width = width;
  field.height = height;
  field.r.resize(field.pixel_count());
  field.g.resize(field.pixel_count());
  field.b.resize(field.pixel_count());
  std::vector<std::uint8_t>* planes[3] = {&field.r, &field.g, &field.b};

  for (int y = 0; y < height; ++y) {
    const int gy = y / cell;
    const double ty = smoothstep(static_cast<double>(y % cell) / cell);
    for (int x = 0; x < width; ++x) {
      const int gx = x / cell;
      const double tx = smoothstep(static_cast<double>(x % cell) / cell);
      for (int c = 0; c < 3; ++c) {
        const double top = node(gx, gy, c) * (1.0 - tx) + node(gx + 1, gy, c) * tx;
        const double bottom = node(gx, gy + 1, c) * (1.0 - tx) + node(gx + 1, gy + 1, c) * tx;
        const double noise = top * (1.0 - ty) + bottom * ty;  // in [0, 1)
        const double value = bg.base[c] + bg.amplitude * (2.0 * noise - 1.0);
        (*planes[c])[static_cast<std::size_t>(y) * width + x] =
            static_cast<std::uint8_t>(std::clamp(value + 0.5, 0.0, 255.0));
      }
    }
  }
  return field;
}

/// Copies the field into the frame shifted by (ox, oy), wrapping around.
void fill_from_field(ColorFrame& frame, const ColorFrame& field, std::int64_t ox,
                     std::int64_t oy) {
  const auto wrap = [](std::int64_t v, int size) {
    const std::int64_t m = v % size;
    return static_cast<int>(m < 0 ? m + size : m);
  };
  for (int y = 0; y < frame.height; ++y) {
    const int sy = wrap(y + oy, field.height);
    const std::uint8_t* src_r = field.r.data() + static_cast<std::size_t>(sy) * field.width;
    const std::uint8_t* src_g = field.g.data() + static_cast<std::size_t>(sy) * field.width;
    const std::uint8_t* src_b = field.b.data() + static_cast<std::size_t>(sy) * field.width;
    std::uint8_t* dst_r = frame.r.data() + static_cast<std::size_t>(y) * frame.width;
    std::uint8_t* dst_g = frame.g.data() + static_cast<std::size_t>(y) * frame.width;
    std::uint8_t* dst_b = frame.b.data() + static_cast<std::size_t>(y) * frame.width;
    for (int x = 0; x < frame.width; ++x) {
      const int sx = wrap(x + ox, field.width);
      dst_r[x] = src_r[sx];
      dst_g[x] = src_g[sx];
      dst_b[x] = src_b[sx];
    }
  }
}

/// Anti-aliased filled ellipse: per-pixel coverage from the approximate
/// signed distance to the ellipse boundary, one-pixel feather.
void draw_ellipse(ColorFrame& frame, double cx, double cy, double rx, double ry,
                  const Rgb& color) {
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - rx - 1.0)));
  const int x1 = std::min(frame.width - 1, static_cast<int>(std::ceil(cx + rx + 1.0)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - ry - 1.0)));
  const int y1 = std::min(frame.height - 1, static_cast<int>(std::ceil(cy + ry + 1.0)));
  const double feather_scale = std::min(rx, ry);

  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double nx = (x + 0.5 - cx) / rx;
      const double ny = (y + 0.5 - cy) / ry;
      const double distance_px = (std::sqrt(nx * nx + ny * ny) - 1.0) * feather_scale;
      const double alpha = std::clamp(0.5 - distance_px, 0.0, 1.0);
      if (alpha <= 0.0) continue;
      const std::size_t i = static_cast<std::size_t>(y) * frame.width + x;
      frame.r[i] = static_cast<std::uint8_t>(frame.r[i] * (1.0 - alpha) + color[0] * alpha + 0.5);
      frame.g[i] = static_cast<std::uint8_t>(frame.g[i] * (1.0 - alpha) + color[1] * alpha + 0.5);
      frame.b[i] = static_cast<std::uint8_t>(frame.b[i] * (1.0 - alpha) + color[2] * alpha + 0.5);
    }
  }
}

struct Margins {
  double x_min, x_max, y_min, y_max;
};

Margins insect_margins(const SynthConfig& cfg, const InsectSpec& insect) {
  const double rx = insect.radius;
  const double ry = insect.radius * insect.aspect;
  return {rx, cfg.width - rx, ry, cfg.height - ry};
}

int resolved_visible_to(const SynthConfig& cfg, const InsectSpec& insect) {
  return insect.visible_to < 0 ? cfg.frame_count - 1 : insect.visible_to;
}

/// Center positions for every visible frame of one insect.
std::vector<std::pair<double, double>> insect_track(const SynthConfig& cfg,
                                                    const InsectSpec& insect,
                                                    std::size_t insect_index) {
  const int from = insect.visible_from;
  const int to = resolved_visible_to(cfg, insect);
  const int length = to - from + 1;
  std::vector<std::pair<double, double>> track(static_cast<std::size_t>(length));
  const Margins margins = insect_margins(cfg, insect);

  if (!insect.waypoints.empty()) {
    const std::size_t segments = insect.waypoints.size() - 1;
    for (int j = 0; j < length; ++j) {
      if (segments == 0 || length == 1) {
        track[j] = insect.waypoints.front();
        continue;
      }
      const double s = static_cast<double>(j) / (length - 1) * segments;
      const std::size_t segment = std::min(static_cast<std::size_t>(s), segments - 1);
      const double t = s - static_cast<double>(segment);
      const auto& [ax, ay] = insect.waypoints[segment];
      const auto& [bx, by] = insect.waypoints[segment + 1];
      track[j] = {ax + (bx - ax) * t, ay + (by - ay) * t};
    }
    return track;
  }

  Rng rng(mix_seed(cfg.seed, kInsectStreamBase + insect_index));
  double x = rng.uniform(margins.x_min, margins.x_max);
  double y = rng.uniform(margins.y_min, margins.y_max);
  for (int j = 0; j < length; ++j) {
    track[j] = {x, y};
    const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    x = std::clamp(x + insect.step * std::cos(angle), margins.x_min, margins.x_max);
    y = std::clamp(y + insect.step * std::sin(angle), margins.y_min, margins.y_max);
  }
  return track;
}

}  // namespace

void SynthConfig::validate() const {
  if (width < 16 || height < 16) {
    throw ConfigInvalid("frame must be at least 16x16, got " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
  if (frame_count < 1) {
    throw ConfigInvalid("frame_count must be at least 1, got " + std::to_string(frame_count));
  }
  if (interval < 1) {
    throw ConfigInvalid("interval must be at least 1 second, got " + std::to_string(interval));
  }
  if (background_jitter < 0.0) {
    throw ConfigInvalid("background_jitter must be non-negative");
  }
  if (const auto* noise = std::get_if<NoiseBackground>(&background)) {
    if (noise->amplitude < 0 || noise->amplitude > 127) {
      throw ConfigInvalid("noise amplitude must be within [0, 127], got " +
                          std::to_string(noise->amplitude));
    }
    if (noise->cell < 2) {
      throw ConfigInvalid("noise cell must be at least 2 px, got " + std::to_string(noise->cell));
    }
  }
  if (site_id.empty()) throw ConfigInvalid("site_id must be non-empty");

  for (std::size_t i = 0; i < insects.size(); ++i) {
    const InsectSpec& insect = insects[i];
    const std::string label = "insect " + std::to_string(i);
    if (insect.radius < 2.0) {
      throw ConfigInvalid(label + ": radius must be at least 2 px, got " +
                          std::to_string(insect.radius));
    }
    if (insect.aspect < 0.3 || insect.aspect > 1.0) {
      throw ConfigInvalid(label + ": aspect must be within [0.3, 1.0], got " +
                          std::to_string(insect.aspect));
    }
    if (insect.step < 0.0) throw ConfigInvalid(label + ": step must be non-negative");
    const int to = resolved_visible_to(*this, insect);
    if (insect.visible_from < 0 || to >= frame_count || insect.visible_from > to) {
      throw ConfigInvalid(label + ": visible range [" + std::to_string(insect.visible_from) +
                          ", " + std::to_string(to) + "] outside frames [0, " +
                          std::to_string(frame_count - 1) + "]");
    }
    const Margins margins = insect_margins(*this, insect);
    if (margins.x_min >= margins.x_max || margins.y_min >= margins.y_max) {
      throw ConfigInvalid(label + ": radius too large for the frame");
    }
    for (const auto& [x, y] : insect.waypoints) {
      if (x < margins.x_min || x > margins.x_max || y < margins.y_min || y > margins.y_max) {
        throw ConfigInvalid(label + ": waypoint (" + std::to_string(x) + ", " +
                            std::to_string(y) + ") puts the insect outside the frame");
      }
    }
  }
}

void generate_frames(const SynthConfig& cfg, const FrameCallback& callback) {
  cfg.validate();

  // Background field (for non-flat backgrounds) and per-frame drift offsets.
  ColorFrame field;
  if (const auto* noise = std::get_if<NoiseBackground>(&cfg.background)) {
    field = make_noise_field(cfg.width, cfg.height, *noise);
  } else if (const auto* textured = std::get_if<TexturedBackground>(&cfg.background)) {
    field = decode_image(textured->image);
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> offsets(
      static_cast<std::size_t>(cfg.frame_count), {0, 0});
  if (cfg.background_jitter > 0.0) {
    Rng drift(mix_seed(cfg.seed, kDriftStream));
    double ox = 0.0;
    double oy = 0.0;
    for (int k = 0; k < cfg.frame_count; ++k) {
      offsets[k] = {std::llround(ox), std::llround(oy)};
      const double angle = drift.uniform(0.0, 2.0 * 3.14159265358979323846);
      ox += cfg.background_jitter * std::cos(angle);
      oy += cfg.background_jitter * std::sin(angle);
    }
  }

  // Insect tracks, indexed by insect then visible-frame offset.
  std::vector<std::vector<std::pair<double, double>>> tracks;
  tracks.reserve(cfg.insects.size());
  for (std::size_t i = 0; i < cfg.insects.size(); ++i) {
    tracks.push_back(insect_track(cfg, cfg.insects[i], i));
  }

  ColorFrame frame;
  std::vector<Annotation> truth;
  for (int k = 0; k < cfg.frame_count; ++k) {
    FrameRecord record;
    record.site_id = cfg.site_id;
    record.timestamp = cfg.start_time + static_cast<std::int64_t>(k) * cfg.interval;
    record.sequence_index = k;

    if (const auto* flat = std::get_if<FlatBackground>(&cfg.background)) {
      frame = ColorFrame::filled(cfg.width, cfg.height, flat->color[0], flat->color[1],
                                 flat->color[2]);
    } else {
      frame.width = cfg.width;
      frame.height = cfg.height;
      frame.r.resize(frame.pixel_count());
      frame.g.resize(frame.pixel_count());
      frame.b.resize(frame.pixel_count());
      fill_from_field(frame, field, offsets[k].first, offsets[k].second);
    }

    truth.clear();
    for (std::size_t i = 0; i < cfg.insects.size(); ++i) {
      const InsectSpec& insect = cfg.insects[i];
      const int to = resolved_visible_to(cfg, insect);
      if (k < insect.visible_from || k > to) continue;
      const auto& [cx, cy] = tracks[i][static_cast<std::size_t>(k - insect.visible_from)];
      const double rx = insect.radius;
      const double ry = insect.radius * insect.aspect;
      draw_ellipse(frame, cx, cy, rx, ry, insect.color);

      const BoundingBox tight(cx - rx, cy - ry, cx + rx, cy + ry);
      const auto clipped = tight.clipped(cfg.width, cfg.height);
      if (clipped.has_value()) {  // margins guarantee this
        truth.push_back(Annotation{record, *clipped, 0});
      }
    }
    callback(static_cast<std::size_t>(k), frame, record, truth);
  }
}

SynthResult generate(const SynthConfig& cfg) {
  SynthResult result;
  const std::size_t count = cfg.frame_count > 0 ? static_cast<std::size_t>(cfg.frame_count) : 0;
  result.frames.reserve(count);
  result.records.reserve(count);
  result.truth.reserve(count);
  generate_frames(cfg, [&](std::size_t, const ColorFrame& frame, const FrameRecord& record,
                           const std::vector<Annotation>& truth) {
    result.frames.push_back(frame);
    result.records.push_back(record);
    result.truth.push_back(truth);
  });
  return result;
}

SynthResult write_dataset(const SynthConfig& cfg, const std::filesystem::path& directory,
                          const PngEncodeOptions& png) {
  SynthResult result = generate(cfg);

  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError(directory.string() + ": " + ec.message());

  char name[32];
  for (std::size_t k = 0; k < result.frames.size(); ++k) {
    std::snprintf(name, sizeof(name), "frame_%06lld",
                  static_cast<long long>(result.records[k].sequence_index));
    const std::filesystem::path image_path = directory / (std::string(name) + ".png");
    write_png(result.frames[k], image_path, png);
    result.records[k].path = image_path;
    for (Annotation& annotation : result.truth[k]) annotation.frame.path = image_path;
    write_annotations(directory / (std::string(name) + ".txt"), result.truth[k], cfg.width,
                      cfg.height);
  }

  SequenceManifest manifest;
  manifest.site_id = cfg.site_id;
  manifest.view = CameraView::kTop;
  manifest.plant = cfg.plant;
  manifest.nominal_interval = cfg.interval;
  manifest.frames = result.records;
  write_manifest_csv(std::span(&manifest, 1), directory / "manifest.csv");
  return result;
}

namespace {

struct ConfigContext {
  std::string file;
  int line = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigInvalid(file + ":" + std::to_string(line) + ": " + message);
  }
};

std::string trim(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r");
  std::size_t end = text.find_last_not_of(" \t\r");
  return begin == std::string::npos ? std::string() : text.substr(begin, end - begin + 1);
}

std::int64_t parse_int(const ConfigContext& ctx, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::int64_t parsed = std::stoll(value, &used);
    if (used != value.size()) ctx.fail("trailing characters in integer \"" + value + "\"");
    return parsed;
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const std::exception&) {
    ctx.fail("expected an integer, got \"" + value + "\"");
  }
}

double parse_double(const ConfigContext& ctx, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) ctx.fail("trailing characters in number \"" + value + "\"");
    return parsed;
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const std::exception&) {
    ctx.fail("expected a number, got \"" + value + "\"");
  }
}

Rgb parse_rgb(const ConfigContext& ctx, const std::string& value) {
  int r = 0, g = 0, b = 0;
  char extra = '\0';
  if (std::sscanf(value.c_str(), " %d , %d , %d %c", &r, &g, &b, &extra) != 3 ||
      r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255) {
    ctx.fail("expected a color as r,g,b with components in [0, 255], got \"" + value + "\"");
  }
  return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
          static_cast<std::uint8_t>(b)};
}

std::vector<std::pair<double, double>> parse_waypoints(const ConfigContext& ctx,
                                                       const std::string& value) {
  std::vector<std::pair<double, double>> waypoints;
  std::istringstream in(value);
  std::string pair;
  while (std::getline(in, pair, ';')) {
    pair = trim(pair);
    if (pair.empty()) continue;
    double x = 0.0, y = 0.0;
    char extra = '\0';
    if (std::sscanf(pair.c_str(), " %lf , %lf %c", &x, &y, &extra) != 2) {
      ctx.fail("expected waypoint as x,y, got \"" + pair + "\"");
    }
    waypoints.emplace_back(x, y);
  }
  if (waypoints.empty()) ctx.fail("waypoint list is empty");
  return waypoints;
}

std::int64_t parse_time(const ConfigContext& ctx, const std::string& value) {
  if (value.find('T') != std::string::npos || value.find('-') != std::string::npos) {
    try {
      return parse_rfc3339(value);
    } catch (const UnparsableTimestamp& e) {
      ctx.fail(e.what());
    }
  }
  return parse_int(ctx, value);
}

}  // namespace

SynthConfig load_synth_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");

  SynthConfig cfg;
  std::string background_kind = "flat";
  Rgb background_color = FlatBackground{}.color;
  NoiseBackground noise;
  bool noise_seed_set = false;
  std::filesystem::path texture;
  std::map<std::size_t, InsectSpec> insects;

  ConfigContext ctx{path.string(), 0};
  std::string line;
  while (std::getline(in, line)) {
    ++ctx.line;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t equals = line.find('=');
    if (equals == std::string::npos) ctx.fail("expected `key = value`, got \"" + line + "\"");
    const std::string key = trim(line.substr(0, equals));
    const std::string value = trim(line.substr(equals + 1));
    if (key.empty() || value.empty()) ctx.fail("empty key or value");

    if (key == "width") {
      cfg.width = static_cast<int>(parse_int(ctx, value));
    } else if (key == "height") {
      cfg.height = static_cast<int>(parse_int(ctx, value));
    } else if (key == "frame_count") {
      cfg.frame_count = static_cast<int>(parse_int(ctx, value));
    } else if (key == "interval") {
      cfg.interval = parse_int(ctx, value);
    } else if (key == "start_time") {
      cfg.start_time = parse_time(ctx, value);
    } else if (key == "site") {
      cfg.site_id = value;
    } else if (key == "plant") {
      cfg.plant = value;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(ctx, value));
    } else if (key == "background") {
      if (value != "flat" && value != "noise" && value != "textured") {
        ctx.fail("background must be flat, noise or textured, got \"" + value + "\"");
      }
      background_kind = value;
    } else if (key == "background_color") {
      background_color = parse_rgb(ctx, value);
    } else if (key == "noise_seed") {
      noise.seed = static_cast<std::uint64_t>(parse_int(ctx, value));
      noise_seed_set = true;
    } else if (key == "noise_amplitude") {
      noise.amplitude = static_cast<int>(parse_int(ctx, value));
    } else if (key == "noise_cell") {
      noise.cell = static_cast<int>(parse_int(ctx, value));
    } else if (key == "texture") {
      texture = value;
    } else if (key == "background_jitter") {
      cfg.background_jitter = parse_double(ctx, value);
    } else if (key.rfind("insect.", 0) == 0) {
      const std::size_t dot = key.find('.', 7);
      if (dot == std::string::npos) ctx.fail("insect keys look like insect.N.field");
      std::size_t index = 0;
      try {
        index = static_cast<std::size_t>(std::stoul(key.substr(7, dot - 7)));
      } catch (const std::exception&) {
        ctx.fail("bad insect index in \"" + key + "\"");
      }
      InsectSpec& insect = insects[index];
      const std::string field = key.substr(dot + 1);
      if (field == "radius") {
        insect.radius = parse_double(ctx, value);
      } else if (field == "aspect") {
        insect.aspect = parse_double(ctx, value);
      } else if (field == "color") {
        insect.color = parse_rgb(ctx, value);
      } else if (field == "step") {
        insect.step = parse_double(ctx, value);
      } else if (field == "waypoints") {
        insect.waypoints = parse_waypoints(ctx, value);
      } else if (field == "visible_from") {
        insect.visible_from = static_cast<int>(parse_int(ctx, value));
      } else if (field == "visible_to") {
        insect.visible_to = static_cast<int>(parse_int(ctx, value));
      } else {
        ctx.fail("unknown insect field \"" + field + "\"");
      }
    } else {
      ctx.fail("unknown key \"" + key + "\"");
    }
  }

  if (background_kind == "flat") {
    cfg.background = FlatBackground{background_color};
  } else if (background_kind == "noise") {
    if (!noise_seed_set) noise.seed = cfg.seed;
    noise.base = background_color;
    cfg.background = noise;
  } else {
    if (texture.empty()) {
      ctx.line = 0;
      ctx.fail("textured background requires a `texture` path");
    }
    cfg.background = TexturedBackground{texture};
  }
  for (auto& [index, insect] : insects) cfg.insects.push_back(std::move(insect));

  cfg.validate();
  return cfg;
}

}  // namespace mie
