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

#include "mie/image_io.hpp"

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>

#include <jpeglib.h>
#include <png.h>

#include "mie/error.hpp"

namespace mie {
namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 28;  // 256 Mpx sanity bound

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

struct PngReadState {
  const std::uint8_t* data = nullptr;
  std::size_t size = 0;
  std::size_t offset = 0;
  char message[128] = "png error";
  std::jmp_buf env;
};

void png_read_bytes(png_structp png, png_bytep out, png_size_t count) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->offset + count > state->size) {
    png_error(png, "unexpected end of stream");
    return;
  }
  std::memcpy(out, state->data + state->offset, count);
  state->offset += count;
}

[[noreturn]] void png_read_fail(png_structp png, png_const_charp message) {
  auto* state = static_cast<PngReadState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", message);
  std::longjmp(state->env, 1);
}

void png_warn_ignore(png_structp, png_const_charp) {}

ColorFrame decode_png(std::span<const std::uint8_t> bytes, const std::string& origin) {
  auto state = std::make_unique<PngReadState>();
  state->data = bytes.data();
  state->size = bytes.size();

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, state.get(), png_read_fail, png_warn_ignore);
  if (png == nullptr) throw IoError(origin + ": png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError(origin + ": png_create_info_struct failed");
  }

  // Row memory lives outside the setjmp scope so a longjmp cannot leak it.
  std::vector<std::uint8_t> interleaved;
  std::vector<png_bytep> row_pointers;
  int width = 0;
  int height = 0;

  if (setjmp(state->env) != 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(origin + ": " + state->message);
  }

  png_set_read_fn(png, state.get(), png_read_bytes);
  png_read_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  if (width <= 0 || height <= 0 ||
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) > kMaxPixels) {
    png_error(png, "unreasonable image dimensions");
  }

  // Normalize every PNG flavor to 8-bit RGB.
  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS) != 0) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  if ((color_type & PNG_COLOR_MASK_ALPHA) != 0 ||
      png_get_valid(png, info, PNG_INFO_tRNS) != 0) {
    png_set_strip_alpha(png);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  interleaved.resize(stride * height);
  row_pointers.resize(height);
  for (int y = 0; y < height; ++y) row_pointers[y] = interleaved.data() + stride * y;
  png_read_image(png, row_pointers.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ColorFrame frame;
  frame.width = width;
  frame.height = height;
  frame.r.resize(frame.pixel_count());
  frame.g.resize(frame.pixel_count());
  frame.b.resize(frame.pixel_count());
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    frame.r[i] = interleaved[i * 3 + 0];
    frame.g[i] = interleaved[i * 3 + 1];
    frame.b[i] = interleaved[i * 3 + 2];
  }
  return frame;
}

struct PngWriteState {
  std::vector<std::uint8_t>* out = nullptr;
  char message[128] = "png error";
  std::jmp_buf env;
};

void png_write_bytes(png_structp png, png_bytep data, png_size_t count) {
  auto* state = static_cast<PngWriteState*>(png_get_io_ptr(png));
  state->out->insert(state->out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

[[noreturn]] void png_write_fail(png_structp png, png_const_charp message) {
  auto* state = static_cast<PngWriteState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", message);
  std::longjmp(state->env, 1);
}

// ---------------------------------------------------------------------------
// JPEG
// ---------------------------------------------------------------------------

struct JpegErrorState {
  jpeg_error_mgr mgr;
  char message[JMSG_LENGTH_MAX] = "jpeg error";
  std::jmp_buf env;
};

[[noreturn]] void jpeg_fail(j_common_ptr cinfo) {
  auto* state = reinterpret_cast<JpegErrorState*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, state->message);
  std::longjmp(state->env, 1);
}

void jpeg_message_ignore(j_common_ptr, int) {}

ColorFrame decode_jpeg(std::span<const std::uint8_t> bytes, const std::string& origin) {
  jpeg_decompress_struct cinfo;
  auto state = std::make_unique<JpegErrorState>();
  cinfo.err = jpeg_std_error(&state->mgr);
  state->mgr.error_exit = jpeg_fail;
  state->mgr.emit_message = jpeg_message_ignore;

  std::vector<std::uint8_t> interleaved;  // outside the setjmp scope
  if (setjmp(state->env) != 0) {
    jpeg_destroy_decompress(&cinfo);
    throw IoError(origin + ": " + state->message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const int width = static_cast<int>(cinfo.output_width);
  const int height = static_cast<int>(cinfo.output_height);
  if (width <= 0 || height <= 0 ||
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) > kMaxPixels) {
    std::snprintf(state->message, sizeof(state->message), "unreasonable image dimensions");
    std::longjmp(state->env, 1);
  }

  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  interleaved.resize(stride * height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = interleaved.data() + stride * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  ColorFrame frame;
  frame.width = width;
  frame.height = height;
  frame.r.resize(frame.pixel_count());
  frame.g.resize(frame.pixel_count());
  frame.b.resize(frame.pixel_count());
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    frame.r[i] = interleaved[i * 3 + 0];
    frame.g[i] = interleaved[i * 3 + 1];
    frame.b[i] = interleaved[i * 3 + 2];
  }
  return frame;
}

std::vector<std::uint8_t> interleave(const ColorFrame& frame) {
  std::vector<std::uint8_t> interleaved(frame.pixel_count() * 3);
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    interleaved[i * 3 + 0] = frame.r[i];
    interleaved[i * 3 + 1] = frame.g[i];
    interleaved[i * 3 + 2] = frame.b[i];
  }
  return interleaved;
}

}  // namespace

ColorFrame decode_image(std::span<const std::uint8_t> bytes, const std::string& origin) {
  static constexpr std::uint8_t kPngMagic[4] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kPngMagic, 4) == 0) {
    return decode_png(bytes, origin);
  }
  if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
    return decode_jpeg(bytes, origin);
  }
  throw IoError(origin + ": not a PNG or JPEG stream");
}

ColorFrame decode_image(const std::filesystem::path& path) {
  return decode_image(read_file(path), path.string());
}

std::vector<std::uint8_t> encode_png(const ColorFrame& frame, const PngEncodeOptions& options) {
  frame.validate();
  if (options.compression_level < 0 || options.compression_level > 9) {
    throw ConfigInvalid("png compression_level must be within [0, 9], got " +
                        std::to_string(options.compression_level));
  }

  std::vector<std::uint8_t> out;
  out.reserve(frame.pixel_count());  // photographic frames rarely inflate
  auto state = std::make_unique<PngWriteState>();
  state->out = &out;

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, state.get(), png_write_fail, png_warn_ignore);
  if (png == nullptr) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  std::vector<std::uint8_t> interleaved = interleave(frame);
  std::vector<png_bytep> row_pointers(frame.height);
  const std::size_t stride = static_cast<std::size_t>(frame.width) * 3;
  for (int y = 0; y < frame.height; ++y) row_pointers[y] = interleaved.data() + stride * y;

  if (setjmp(state->env) != 0) {
    png_destroy_write_struct(&png, &info);
    throw IoError(std::string("png encode: ") + state->message);
  }

  png_set_write_fn(png, state.get(), png_write_bytes, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(frame.width),
               static_cast<png_uint_32>(frame.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, options.compression_level);
  // SUB filtering alone captures most of the row-to-row redundancy at a
  // fraction of the cost of trying all five filters per row.
  png_set_filter(png, 0, options.compression_level >= 6 ? PNG_ALL_FILTERS : PNG_FILTER_SUB);
  png_write_info(png, info);
  png_write_image(png, row_pointers.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::vector<std::uint8_t> encode_jpeg(const ColorFrame& frame, const JpegEncodeOptions& options) {
  frame.validate();
  if (options.quality < 1 || options.quality > 100) {
    throw ConfigInvalid("jpeg quality must be within [1, 100], got " +
                        std::to_string(options.quality));
  }

  jpeg_compress_struct cinfo;
  auto state = std::make_unique<JpegErrorState>();
  cinfo.err = jpeg_std_error(&state->mgr);
  state->mgr.error_exit = jpeg_fail;
  state->mgr.emit_message = jpeg_message_ignore;

  // Heap slot: jpeg_mem_dest rewrites it after setjmp, and locals touched
  // between setjmp and longjmp have unspecified values afterwards.
  struct MemDest {
    unsigned char* buffer = nullptr;
    unsigned long size = 0;
  };
  auto dest = std::make_unique<MemDest>();
  std::vector<std::uint8_t> interleaved = interleave(frame);

  if (setjmp(state->env) != 0) {
    jpeg_destroy_compress(&cinfo);
    if (dest->buffer != nullptr) std::free(dest->buffer);
    throw IoError(std::string("jpeg encode: ") + state->message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &dest->buffer, &dest->size);
  cinfo.image_width = static_cast<JDIMENSION>(frame.width);
  cinfo.image_height = static_cast<JDIMENSION>(frame.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, options.quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);

  const std::size_t stride = static_cast<std::size_t>(frame.width) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = interleaved.data() + stride * cinfo.next_scanline;
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<std::uint8_t> out(dest->buffer, dest->buffer + dest->size);
  std::free(dest->buffer);
  return out;
}

void write_png(const ColorFrame& frame, const std::filesystem::path& path,
               const PngEncodeOptions& options) {
  write_file(path, encode_png(frame, options));
}

void write_jpeg(const ColorFrame& frame, const std::filesystem::path& path,
                const JpegEncodeOptions& options) {
  write_file(path, encode_jpeg(frame, options));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  if (size < 0) throw IoError(path.string() + ": cannot determine size");
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw IoError(path.string() + ": short read");
  }
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  if (!bytes.empty() &&
      !out.write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()))) {
    throw IoError(path.string() + ": short write");
  }
  out.close();
  if (!out) throw IoError(path.string() + ": close failed");
}

}  // namespace mie
