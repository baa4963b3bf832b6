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

#include "mie/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "csv_util.hpp"
#include "mie/civil_time.hpp"
#include "mie/error.hpp"

namespace mie {
namespace {

enum class TokenKind { kLiteral, kYear, kMonth, kDay, kHour, kMinute, kSecond, kCounter };

struct Token {
  TokenKind kind;
  char literal = '\0';
};

int field_width(TokenKind kind) { return kind == TokenKind::kYear ? 4 : 2; }

/// Compiles the filename template into a token list and checks that it can
/// produce a timestamp at all.
std::vector<Token> compile_pattern(const std::string& pattern) {
  std::vector<Token> tokens;
  bool has_counter = false;
  bool has_year = false, has_month = false, has_day = false;
  bool has_time = false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '%') {
      tokens.push_back({TokenKind::kLiteral, pattern[i]});
      continue;
    }
    if (i + 1 >= pattern.size()) throw ConfigInvalid("pattern ends with a bare '%'");
    const char c = pattern[++i];
    switch (c) {
      case '%':
        tokens.push_back({TokenKind::kLiteral, '%'});
        break;
      case 'Y':
        tokens.push_back({TokenKind::kYear});
        has_year = true;
        break;
      case 'm':
        tokens.push_back({TokenKind::kMonth});
        has_month = true;
        break;
      case 'd':
        tokens.push_back({TokenKind::kDay});
        has_day = true;
        break;
      case 'H':
        tokens.push_back({TokenKind::kHour});
        has_time = true;
        break;
      case 'M':
        tokens.push_back({TokenKind::kMinute});
        has_time = true;
        break;
      case 'S':
        tokens.push_back({TokenKind::kSecond});
        has_time = true;
        break;
      case 'i':
        tokens.push_back({TokenKind::kCounter});
        has_counter = true;
        break;
      default:
        throw ConfigInvalid(std::string("unknown pattern field '%") + c + "'");
    }
  }
  const bool has_date = has_year && has_month && has_day;
  if ((has_year || has_month || has_day || has_time) && !has_date) {
    throw ConfigInvalid("pattern with date fields must include %Y, %m and %d: " + pattern);
  }
  if (!has_date && !has_counter) {
    throw ConfigInvalid("pattern must contain %i or %Y%m%d fields: " + pattern);
  }
  return tokens;
}

struct MatchedFields {
  bool has_date = false;
  int year = 1970, month = 1, day = 1, hour = 0, minute = 0, second = 0;
  bool has_counter = false;
  std::int64_t counter = 0;
};

/// Matches a file name against the compiled pattern. %i takes a maximal
/// digit run; the date fields are fixed width.
std::optional<MatchedFields> match_name(const std::string& name, const std::vector<Token>& tokens) {
  MatchedFields fields;
  std::size_t pos = 0;
  for (const Token& token : tokens) {
    if (token.kind == TokenKind::kLiteral) {
      if (pos >= name.size() || name[pos] != token.literal) return std::nullopt;
      ++pos;
      continue;
    }
    if (token.kind == TokenKind::kCounter) {
      std::size_t end = pos;
      while (end < name.size() && std::isdigit(static_cast<unsigned char>(name[end])) != 0) ++end;
      if (end == pos || end - pos > 18) return std::nullopt;
      fields.counter = std::stoll(name.substr(pos, end - pos));
      fields.has_counter = true;
      pos = end;
      continue;
    }
    const int width = field_width(token.kind);
    if (pos + width > name.size()) return std::nullopt;
    int value = 0;
    for (int i = 0; i < width; ++i) {
      const char c = name[pos + i];
      if (std::isdigit(static_cast<unsigned char>(c)) == 0) return std::nullopt;
      value = value * 10 + (c - '0');
    }
    pos += width;
    switch (token.kind) {
      case TokenKind::kYear: fields.year = value; fields.has_date = true; break;
      case TokenKind::kMonth: fields.month = value; break;
      case TokenKind::kDay: fields.day = value; break;
      case TokenKind::kHour: fields.hour = value; break;
      case TokenKind::kMinute: fields.minute = value; break;
      case TokenKind::kSecond: fields.second = value; break;
      default: break;
    }
  }
  if (pos != name.size()) return std::nullopt;
  return fields;
}

std::string lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

}  // namespace

std::string to_string(CameraView view) { return view == CameraView::kTop ? "Top" : "Side"; }

CameraView camera_view_from_string(const std::string& text) {
  const std::string lowered = lowercase(text);
  if (lowered == "top") return CameraView::kTop;
  if (lowered == "side") return CameraView::kSide;
  throw ConfigInvalid("camera view must be Top or Side, got \"" + text + "\"");
}

void SequenceManifest::validate() const {
  if (site_id.empty()) throw ConfigInvalid("manifest site_id must be non-empty");
  if (nominal_interval <= 0) {
    throw ConfigInvalid("nominal_interval must be positive, got " +
                        std::to_string(nominal_interval));
  }
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].timestamp < frames[i - 1].timestamp ||
        frames[i].sequence_index <= frames[i - 1].sequence_index) {
      throw UnsortedInput("manifest " + site_id + " unsorted at position " + std::to_string(i));
    }
  }
}

ScanResult scan_sequence(const std::filesystem::path& root, const std::string& pattern,
                         const ScanOptions& options) {
  const std::vector<Token> tokens = compile_pattern(pattern);
  if (options.nominal_interval <= 0) {
    throw ConfigInvalid("nominal_interval must be positive, got " +
                        std::to_string(options.nominal_interval));
  }
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) {
    throw IoError(root.string() + ": not a directory");
  }

  ScanResult result;
  result.manifest.site_id = options.site_id;
  result.manifest.view = options.view;
  result.manifest.plant = options.plant;
  result.manifest.nominal_interval = options.nominal_interval;

  struct Candidate {
    std::int64_t timestamp;
    std::string name;
    std::filesystem::path path;
    std::optional<std::int64_t> counter;
  };
  std::vector<Candidate> candidates;

  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    const std::optional<MatchedFields> fields = match_name(name, tokens);
    if (!fields.has_value()) {
      result.skipped.push_back({entry.path(), "does not match pattern " + pattern});
      continue;
    }
    try {
      std::int64_t timestamp;
      if (fields->has_date) {
        timestamp = epoch_from_civil(fields->year, fields->month, fields->day, fields->hour,
                                     fields->minute, fields->second);
      } else {
        timestamp = options.counter_epoch + fields->counter * options.nominal_interval;
      }
      candidates.push_back({timestamp, name, entry.path(),
                            fields->has_date ? std::nullopt
                                             : std::optional<std::int64_t>(fields->counter)});
    } catch (const UnparsableTimestamp& e) {
      result.skipped.push_back({entry.path(), e.what()});
    }
  }

  if (candidates.empty()) {
    throw EmptySequence(root.string() + ": no file matches pattern " + pattern);
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.timestamp, a.name) < std::tie(b.timestamp, b.name);
  });

  std::int64_t previous_index = -1;
  for (const Candidate& candidate : candidates) {
    // Counter templates keep the counter as the index so holes in the
    // numbering stay visible; duplicates cannot be ordered and are skipped.
    const std::int64_t index =
        candidate.counter.has_value() ? *candidate.counter : previous_index + 1;
    if (index <= previous_index) {
      result.skipped.push_back({candidate.path, "duplicate frame counter"});
      continue;
    }
    previous_index = index;
    result.manifest.frames.push_back(
        {options.site_id, candidate.timestamp, index, candidate.path});
  }

  result.manifest.validate();
  return result;
}

namespace {
constexpr const char* kManifestHeader = "path,site,view,plant,timestamp";
}  // namespace

std::vector<SequenceManifest> read_manifest_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open for reading");

  std::string line;
  std::vector<std::string> fields;
  static const std::vector<std::string> kHeaderFields = {"path", "site", "view", "plant",
                                                         "timestamp"};
  if (!std::getline(in, line) || !csv::split(line, fields) || fields != kHeaderFields) {
    throw MalformedLine(path.string(), 1,
                        std::string("expected header `") + kManifestHeader + "`");
  }

  // Group rows by site metadata, keeping first-seen order of the groups.
  std::vector<SequenceManifest> manifests;
  std::map<std::string, std::size_t> group_index;
  for (int line_number = 2; std::getline(in, line); ++line_number) {
    if (line.empty() || line == "\r") continue;
    if (!csv::split(line, fields)) {
      throw MalformedLine(path.string(), line_number, "unbalanced quotes");
    }
    if (fields.size() != 5) {
      throw MalformedLine(path.string(), line_number,
                          "expected 5 fields, got " + std::to_string(fields.size()));
    }
    CameraView view;
    std::int64_t timestamp;
    try {
      view = camera_view_from_string(fields[2]);
      timestamp = parse_rfc3339(fields[4]);
    } catch (const Error& e) {
      throw MalformedLine(path.string(), line_number, e.what());
    }
    if (fields[1].empty()) {
      throw MalformedLine(path.string(), line_number, "empty site field");
    }

    const std::string key = fields[1] + "\x1f" + fields[2] + "\x1f" + fields[3];
    auto [it, inserted] = group_index.emplace(key, manifests.size());
    if (inserted) {
      SequenceManifest manifest;
      manifest.site_id = fields[1];
      manifest.view = view;
      manifest.plant = fields[3];
      manifests.push_back(std::move(manifest));
    }
    manifests[it->second].frames.push_back({fields[1], timestamp, 0, fields[0]});
  }

  for (SequenceManifest& manifest : manifests) {
    std::sort(manifest.frames.begin(), manifest.frames.end(),
              [](const FrameRecord& a, const FrameRecord& b) {
                return std::tie(a.timestamp, a.path) < std::tie(b.timestamp, b.path);
              });
    for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
      manifest.frames[i].sequence_index = static_cast<std::int64_t>(i);
    }
    manifest.validate();
  }
  return manifests;
}

void write_manifest_csv(std::span<const SequenceManifest> manifests,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << kManifestHeader << "\n";
  for (const SequenceManifest& manifest : manifests) {
    manifest.validate();
    for (const FrameRecord& frame : manifest.frames) {
      out << csv::escape(frame.path.string()) << "," << csv::escape(manifest.site_id) << ","
          << to_string(manifest.view) << "," << csv::escape(manifest.plant) << ","
          << format_rfc3339(frame.timestamp) << "\n";
    }
  }
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace mie
