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

#include <cstdlib>
#include <vector>

#include <doctest.h>

#include "mie/error.hpp"
#include "mie/image_io.hpp"
#include "mie/rng.hpp"
#include "test_support.hpp"

namespace mie {
namespace {

TEST_SUITE_BEGIN("image_io");

TEST_CASE("png encoding round-trips bit-exactly") {
  Rng rng(5);
  for (const auto [width, height] : {std::pair{64, 48}, std::pair{3, 3}, std::pair{33, 7}}) {
    const ColorFrame frame = test::random_frame(width, height, rng);
    const std::vector<std::uint8_t> bytes = encode_png(frame);
    const ColorFrame decoded = decode_image(bytes, "test");
    CHECK(decoded.width == frame.width);
    CHECK(decoded.height == frame.height);
    CHECK(decoded.r == frame.r);
    CHECK(decoded.g == frame.g);
    CHECK(decoded.b == frame.b);
  }
}

TEST_CASE("png compression level changes size but not pixels") {
  Rng rng(6);
  const ColorFrame frame = test::random_frame(80, 60, rng);
  PngEncodeOptions fast;
  fast.compression_level = 1;
  PngEncodeOptions small;
  small.compression_level = 9;
  const ColorFrame from_fast = decode_image(encode_png(frame, fast), "fast");
  const ColorFrame from_small = decode_image(encode_png(frame, small), "small");
  CHECK(from_fast.r == frame.r);
  CHECK(from_small.r == frame.r);
  CHECK(from_fast.g == from_small.g);
  CHECK(from_fast.b == from_small.b);
}

TEST_CASE("jpeg round-trip preserves dimensions and approximates flat colors") {
  const ColorFrame frame = ColorFrame::filled(96, 64, 120, 180, 60);
  JpegEncodeOptions options;
  options.quality = 95;
  const ColorFrame decoded = decode_image(encode_jpeg(frame, options), "jpeg");
  REQUIRE(decoded.width == 96);
  REQUIRE(decoded.height == 64);
  // Lossy codec on a uniform image: every pixel stays close to the source.
  for (std::size_t i = 0; i < decoded.pixel_count(); i += 97) {
    CHECK(std::abs(int{decoded.r[i]} - 120) <= 4);
    CHECK(std::abs(int{decoded.g[i]} - 180) <= 4);
    CHECK(std::abs(int{decoded.b[i]} - 60) <= 4);
  }
}

TEST_CASE("decode_image sniffs the container from its leading bytes") {
  const ColorFrame frame = ColorFrame::filled(8, 8, 1, 2, 3);
  CHECK(decode_image(encode_png(frame), "png").width == 8);
  CHECK(decode_image(encode_jpeg(frame), "jpg").width == 8);
}

TEST_CASE("decoding garbage raises IoError") {
  const std::vector<std::uint8_t> garbage{'n', 'o', 't', ' ', 'a', 'n', ' ', 'i', 'm', 'g'};
  CHECK_THROWS_AS(decode_image(garbage, "garbage"), IoError);
  CHECK_THROWS_AS(decode_image(std::vector<std::uint8_t>{}, "empty"), IoError);
  // A PNG signature followed by junk must fail cleanly, not crash.
  std::vector<std::uint8_t> truncated{0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a, 1, 2, 3};
  CHECK_THROWS_AS(decode_image(truncated, "truncated"), IoError);
}

TEST_CASE("file round-trip creates parent directories") {
  test::TempDir dir;
  const auto path = dir.path() / "a" / "b" / "frame.png";
  const ColorFrame frame = ColorFrame::filled(16, 16, 9, 8, 7);
  write_png(frame, path);
  REQUIRE(std::filesystem::exists(path));
  const ColorFrame decoded = decode_image(path);
  CHECK(decoded.r == frame.r);
  CHECK(decoded.g == frame.g);
  CHECK(decoded.b == frame.b);
}

TEST_CASE("reading a missing file raises IoError") {
  CHECK_THROWS_AS(decode_image("/nonexistent/path/frame.png"), IoError);
}

TEST_CASE("jpeg writer honors the quality knob") {
  Rng rng(7);
  const ColorFrame frame = test::random_frame(120, 90, rng);
  JpegEncodeOptions low;
  low.quality = 20;
  JpegEncodeOptions high;
  high.quality = 95;
  CHECK(encode_jpeg(frame, low).size() < encode_jpeg(frame, high).size());
}

TEST_SUITE_END();

}  // namespace
}  // namespace mie
