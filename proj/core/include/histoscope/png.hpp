#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "histoscope/image.hpp"

namespace histoscope {

/// 8-bit RGBA, no interlacing, fixed compression settings, no timestamps.
std::vector<std::byte> encode_png_rgba(std::uint32_t width, std::uint32_t height,
                                       std::span<const std::uint8_t> rgba);

/// Grayscale PNG at the record's bit depth.
std::vector<std::byte> encode_png_gray(const ImageRecord& image);

/// 8-bit RGB(A) PNG from interleaved samples; channels is 3 or 4.
std::vector<std::byte> encode_png_color8(std::uint32_t width, std::uint32_t height, int channels,
                                         std::span<const std::uint8_t> samples);

}  // namespace histoscope
