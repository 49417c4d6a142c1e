// Copyright 2026 The vesselq Authors.
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

#include "vesselq/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vesselq/error.hpp"

namespace vesselq {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool is_png(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0;
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

GrayImage decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kIo, std::string("PNG decode failed: ") + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw Error(ErrorCode::kInvalidInput, "unsupported bit depth: 16-bit PNG");
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw Error(ErrorCode::kInvalidInput, "zero-area image");
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::kIo, "PNG decode failed: " + message);
  }

  GrayImage out{static_cast<int>(image.width), static_cast<int>(image.height), {}};
  if (!color) {
    out.pixels = std::move(buffer);
    return out;
  }
  out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = luma(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
  }
  return out;
}

// Reads the next header token of a PNM file, skipping whitespace and comments.
std::string pnm_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
    token.push_back(static_cast<char>(bytes[pos++]));
  }
  return token;
}

int pnm_int(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
  const std::string token = pnm_token(bytes, pos);
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos ||
      token.size() > 9) {
    throw Error(ErrorCode::kIo, "malformed PGM header");
  }
  return std::stoi(token);
}

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 2;
  const int width = pnm_int(bytes, pos);
  const int height = pnm_int(bytes, pos);
  const int maxval = pnm_int(bytes, pos);
  if (width == 0 || height == 0) throw Error(ErrorCode::kInvalidInput, "zero-area image");
  if (maxval < 1 || maxval > 255) {
    throw Error(ErrorCode::kInvalidInput,
                "unsupported bit depth: PGM maxval " + std::to_string(maxval));
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw Error(ErrorCode::kIo, "malformed PGM header");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos < n) throw Error(ErrorCode::kIo, "truncated PGM data");

  GrayImage out{width, height, std::vector<std::uint8_t>(bytes.begin() + pos, bytes.begin() + pos + n)};
  if (maxval != 255) {
    for (auto& v : out.pixels) {
      v = static_cast<std::uint8_t>((std::min<int>(v, maxval) * 255 + maxval / 2) / maxval);
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path);
  return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

void write_file(const std::string& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

GrayImage decode_gray(const std::vector<std::uint8_t>& bytes) {
  if (is_png(bytes)) return decode_png(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
  throw Error(ErrorCode::kIo, "unrecognized image format (expected PNG or binary PGM)");
}

GrayImage read_gray(const std::string& path) { return decode_gray(read_file(path)); }

BinaryMask load_mask(const std::string& path, std::uint8_t threshold) {
  return binarize(read_gray(path), threshold);
}

namespace {

std::vector<std::uint8_t> encode_png_raw(int width, int height, std::uint32_t format,
                                         const void* pixels) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const GrayImage& image) {
  return encode_png_raw(image.width, image.height, PNG_FORMAT_GRAY, image.pixels.data());
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  static_assert(sizeof(Rgb) == 3);
  return encode_png_raw(image.width, image.height, PNG_FORMAT_RGB, image.pixels.data());
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
  std::ostringstream header;
  header << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

void write_png(const std::string& path, const GrayImage& image) {
  write_file(path, encode_png(image));
}

void write_png(const std::string& path, const RgbImage& image) {
  write_file(path, encode_png(image));
}

void write_pgm(const std::string& path, const GrayImage& image) {
  write_file(path, encode_pgm(image));
}

}  // namespace vesselq
