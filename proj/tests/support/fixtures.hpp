#pragma once

// Test-only encoders that produce small files in each supported format, plus
// random image generators. Kept independent of the decoders under test.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "histoscope/image.hpp"

namespace histoscope::testing {

std::span<const std::byte> as_bytes(const std::string& s);

struct TiffSpec {
  std::uint32_t width = 1;
  std::uint32_t height = 1;
  std::uint16_t bits = 8;
  std::uint16_t samples = 1;
  std::uint16_t photometric = 1;  // BlackIsZero
  std::uint16_t compression = 1;  // 1 none, 32773 PackBits, anything else written raw
  std::uint16_t sample_format = 1;
  std::uint16_t extra_samples = 0;
  std::uint32_t rows_per_strip = 0;  // 0 = whole image in one strip
  bool big_endian = false;
  bool tiled = false;
  bool planar_separate = false;
  std::vector<std::uint16_t> colormap;  // 3 * 2^bits entries for palette images
  std::vector<std::uint32_t> data;      // interleaved samples, row-major
};

std::vector<std::byte> make_tiff(const TiffSpec& spec);

/// BMP from RGB triples (24/32 bpp) or palette indices (1/4/8 bpp).
struct BmpSpec {
  std::uint32_t width = 1;
  std::uint32_t height = 1;
  std::uint16_t bpp = 24;
  bool top_down = false;
  bool rle8 = false;
  std::vector<std::array<std::uint8_t, 3>> palette;
  std::vector<std::uint8_t> indices;                 // palettized
  std::vector<std::array<std::uint8_t, 3>> rgb;      // 24/32 bpp
};

std::vector<std::byte> make_bmp(const BmpSpec& spec);

struct GifSpec {
  std::uint32_t width = 1;
  std::uint32_t height = 1;
  std::vector<std::array<std::uint8_t, 3>> palette;  // power-of-two size, 2..256
  std::vector<std::uint8_t> indices;
  bool interlaced = false;
  /// Appended as a second frame; must not affect decoding.
  std::vector<std::uint8_t> second_frame;
};

std::vector<std::byte> make_gif(const GifSpec& spec);

/// JPEG via libjpeg; components is 1 or 3.
std::vector<std::byte> make_jpeg(std::uint32_t width, std::uint32_t height, int components,
                                 std::span<const std::uint8_t> samples, bool progressive, int quality = 100);

/// 16-bit PNG with `channels` big-endian samples per pixel (1-4).
std::vector<std::byte> make_png16(std::uint32_t width, std::uint32_t height, int channels,
                                  std::span<const std::uint16_t> samples);

/// Palette PNG (8-bit indices).
std::vector<std::byte> make_png_palette(std::uint32_t width, std::uint32_t height,
                                        const std::vector<std::array<std::uint8_t, 3>>& palette,
                                        std::span<const std::uint8_t> indices);

ImageRecord random_image(std::mt19937_64& rng, std::uint32_t width, std::uint32_t height, BitDepth depth,
                         std::string name = "random");

/// Image whose values cluster in a random window of the domain, so ranges see
/// both empty and crowded bins.
ImageRecord clustered_image(std::mt19937_64& rng, std::uint32_t width, std::uint32_t height, BitDepth depth,
                            std::string name = "clustered");

ImageRecord image_from(std::vector<std::uint16_t> pixels, std::uint32_t width, std::uint32_t height,
                       BitDepth depth = BitDepth::k8, std::string name = "fixture");

}  // namespace histoscope::testing
