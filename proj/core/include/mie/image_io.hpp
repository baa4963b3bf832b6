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

#include "mie/frame.hpp"

namespace mie {

// PNG and JPEG codecs for 8-bit RGB frames. Everything non-RGB (grayscale,
// palette, 16-bit, alpha) is converted on decode; encode always writes
// plain 8-bit RGB. All failures throw IoError.

struct PngEncodeOptions {
  /// zlib level 0-9. Bulk time-lapse output is write-heavy, so the default
  /// favors speed; raise it when archival size matters.
  int compression_level = 1;
};

struct JpegEncodeOptions {
  int quality = 90;  // 1-100
};

/// Decodes a PNG or JPEG file, sniffing the format from its signature.
ColorFrame decode_image(const std::filesystem::path& path);

/// Same, from an in-memory stream. `origin` names the source in errors.
ColorFrame decode_image(std::span<const std::uint8_t> bytes, const std::string& origin);

std::vector<std::uint8_t> encode_png(const ColorFrame& frame, const PngEncodeOptions& options = {});
std::vector<std::uint8_t> encode_jpeg(const ColorFrame& frame,
                                      const JpegEncodeOptions& options = {});

void write_png(const ColorFrame& frame, const std::filesystem::path& path,
               const PngEncodeOptions& options = {});
void write_jpeg(const ColorFrame& frame, const std::filesystem::path& path,
                const JpegEncodeOptions& options = {});

/// Reads a whole file into memory. Throws IoError.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Writes bytes to a file, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace mie
