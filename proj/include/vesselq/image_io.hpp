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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vesselq/raster.hpp"

namespace vesselq {

/// Reads an 8-bit PNG or binary PGM (P5). Color PNGs are reduced to luma;
/// alpha is dropped. Throws Error(kIo) on unreadable files and
/// Error(kInvalidInput) on unsupported bit depths or zero-area images.
GrayImage read_gray(const std::string& path);

/// Decodes from memory; the format is sniffed from the leading bytes.
GrayImage decode_gray(const std::vector<std::uint8_t>& bytes);

/// Loads a mask: foreground iff intensity >= threshold.
BinaryMask load_mask(const std::string& path, std::uint8_t threshold = 128);

std::vector<std::uint8_t> encode_png(const GrayImage& image);
std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);

void write_png(const std::string& path, const GrayImage& image);
void write_png(const std::string& path, const RgbImage& image);
void write_pgm(const std::string& path, const GrayImage& image);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_file(const std::string& path, const std::string& text);

}  // namespace vesselq
