#include <algorithm>
#include <array>
#include <bit>
#include <vector>

#include "codecs.hpp"

namespace histoscope::codec {
namespace {

enum Compression : std::uint32_t {
  kRgb = 0,
  kRle8 = 1,
  kRle4 = 2,
  kBitfields = 3,
  kAlphaBitfields = 6,
};

struct Channel {
  std::uint32_t mask = 0;
  unsigned shift = 0;
  std::uint32_t max = 0;

  explicit Channel(std::uint32_t m = 0) : mask(m) {
    if (mask == 0) return;
    shift = static_cast<unsigned>(std::countr_zero(mask));
    max = mask >> shift;
  }

  std::uint8_t extract(std::uint32_t pixel) const noexcept {
    if (mask == 0) return 0;
    const std::uint32_t v = (pixel & mask) >> shift;
    return static_cast<std::uint8_t>((std::uint64_t{v} * 255 + max / 2) / max);
  }
};

using Palette = std::vector<std::array<std::uint8_t, 3>>;

std::uint16_t palette_gray(const Palette& palette, std::size_t index) {
  if (index >= palette.size()) return 0;
  const auto& c = palette[index];
  return rgb_to_gray(c[0], c[1], c[2]);
}

/// Expands RLE8/RLE4 into one palette index per pixel, bottom-up row order.
std::vector<std::uint8_t> decode_rle(ByteReader& in, std::uint32_t width, std::uint32_t height,
                                     bool four_bit, const std::string& name) {
  std::vector<std::uint8_t> indices(std::size_t{width} * height, 0);
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  const auto put = [&](std::uint8_t value) {
    if (x < width && y < height) indices[std::size_t{y} * width + x] = value;
    ++x;
  };
  while (in.remaining() >= 2) {
    const std::uint8_t count = in.u8();
    const std::uint8_t value = in.u8();
    if (count > 0) {
      for (unsigned i = 0; i < count; ++i) {
        put(four_bit ? static_cast<std::uint8_t>((i % 2 == 0) ? value >> 4 : value & 0x0f) : value);
      }
      continue;
    }
    if (value == 0) {  // end of line
      x = 0;
      ++y;
    } else if (value == 1) {  // end of bitmap
      break;
    } else if (value == 2) {  // delta
      x += in.u8();
      y += in.u8();
    } else {  // absolute run
      const unsigned n = value;
      const unsigned byte_count = four_bit ? (n + 1) / 2 : n;
      const auto run = in.take(byte_count);
      for (unsigned i = 0; i < n; ++i) {
        const auto b = static_cast<std::uint8_t>(run[four_bit ? i / 2 : i]);
        put(four_bit ? static_cast<std::uint8_t>((i % 2 == 0) ? b >> 4 : b & 0x0f) : b);
      }
      if (byte_count % 2 != 0) in.skip(1);
    }
  }
  if (y > height) corrupt(name, "RLE data runs past the bitmap");
  return indices;
}

}  // namespace

ImageRecord decode_bmp(std::span<const std::byte> bytes, std::string name) {
  ByteReader in(bytes, name);
  if (in.u8() != 'B' || in.u8() != 'M') throw Error(ErrorCode::UnsupportedFormat, name + ": not a BMP file");
  in.skip(8);
  const std::uint32_t pixel_offset = in.u32();

  const std::size_t dib_start = in.position();
  const std::uint32_t dib_size = in.u32();
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::uint16_t bpp = 0;
  std::uint32_t compression = kRgb;
  std::uint32_t colors_used = 0;
  std::array<std::uint32_t, 3> masks{};
  bool core_header = false;

  if (dib_size == 12) {
    core_header = true;
    width = in.u16();
    height = static_cast<std::int16_t>(in.u16());
    in.skip(2);
    bpp = in.u16();
  } else if (dib_size >= 40) {
    width = in.i32();
    height = in.i32();
    in.skip(2);
    bpp = in.u16();
    compression = in.u32();
    in.skip(12);
    colors_used = in.u32();
    in.skip(4);
    if (compression == kBitfields || compression == kAlphaBitfields) {
      // Masks sit inside V2+ headers, or directly after a 40-byte header.
      masks = {in.u32(), in.u32(), in.u32()};
    }
  } else {
    throw Error(ErrorCode::UnsupportedFormat, name + ": unsupported BMP header size");
  }
  const bool uses_masks = compression == kBitfields || compression == kAlphaBitfields;
  std::size_t palette_start = dib_start + dib_size;
  if (dib_size == 40 && uses_masks) palette_start += compression == kAlphaBitfields ? 16 : 12;

  if (width <= 0 || height == 0) corrupt(name, "invalid BMP dimensions");
  const bool top_down = height < 0;
  if (top_down) height = -height;
  if (width > 0xFFFF || height > 0xFFFF) corrupt(name, "BMP dimensions too large");
  check_dimensions(name, static_cast<std::uint64_t>(width), static_cast<std::uint64_t>(height));
  const auto w = static_cast<std::uint32_t>(width);
  const auto h = static_cast<std::uint32_t>(height);

  const bool palettized = bpp <= 8;
  if (bpp != 1 && bpp != 4 && bpp != 8 && bpp != 16 && bpp != 24 && bpp != 32) {
    throw Error(ErrorCode::UnsupportedDepth, name + ": unsupported BMP bit count " + std::to_string(bpp));
  }
  if (compression == kRle8 && bpp != 8) corrupt(name, "RLE8 requires 8 bits per pixel");
  if (compression == kRle4 && bpp != 4) corrupt(name, "RLE4 requires 4 bits per pixel");
  if (compression != kRgb && compression != kRle8 && compression != kRle4 && !uses_masks) {
    throw Error(ErrorCode::UnsupportedFormat, name + ": unsupported BMP compression " + std::to_string(compression));
  }

  Palette palette;
  if (palettized) {
    const std::size_t entries = colors_used != 0 ? colors_used : std::size_t{1} << bpp;
    const std::size_t entry_size = core_header ? 3 : 4;
    const auto raw = in.slice(palette_start, std::min<std::size_t>(entries, 256) * entry_size);
    for (std::size_t i = 0; i + entry_size <= raw.size(); i += entry_size) {
      palette.push_back({static_cast<std::uint8_t>(raw[i + 2]), static_cast<std::uint8_t>(raw[i + 1]),
                         static_cast<std::uint8_t>(raw[i])});
    }
  }

  std::vector<std::uint16_t> pixels(std::size_t{w} * h);
  const auto row_of = [&](std::uint32_t stored_row) { return top_down ? stored_row : h - 1 - stored_row; };

  if (compression == kRle8 || compression == kRle4) {
    in.seek(pixel_offset);
    const auto indices = decode_rle(in, w, h, compression == kRle4, name);
    for (std::uint32_t r = 0; r < h; ++r) {
      for (std::uint32_t x = 0; x < w; ++x) {
        // RLE bitmaps are always stored bottom-up.
        pixels[std::size_t{h - 1 - r} * w + x] = palette_gray(palette, indices[std::size_t{r} * w + x]);
      }
    }
    return ImageRecord(std::move(name), w, h, BitDepth::k8, std::move(pixels));
  }

  if (!uses_masks) {
    if (bpp == 16) masks = {0x7C00, 0x03E0, 0x001F};
    if (bpp == 32) masks = {0x00FF0000, 0x0000FF00, 0x000000FF};
  }
  const Channel red(masks[0]);
  const Channel green(masks[1]);
  const Channel blue(masks[2]);

  const std::size_t stride = ((std::size_t{bpp} * w + 31) / 32) * 4;
  const auto data = in.slice(pixel_offset, stride * h);
  for (std::uint32_t r = 0; r < h; ++r) {
    const auto row = data.subspan(std::size_t{r} * stride, stride);
    const auto at = [&](std::size_t i) { return static_cast<std::uint32_t>(row[i]); };
    std::uint16_t* out = pixels.data() + std::size_t{row_of(r)} * w;
    for (std::uint32_t x = 0; x < w; ++x) {
      switch (bpp) {
        case 1: out[x] = palette_gray(palette, (at(x / 8) >> (7 - x % 8)) & 1); break;
        case 4: out[x] = palette_gray(palette, (at(x / 2) >> (x % 2 == 0 ? 4 : 0)) & 0x0f); break;
        case 8: out[x] = palette_gray(palette, at(x)); break;
        case 16: {
          const std::uint32_t v = at(2 * x) | (at(2 * x + 1) << 8);
          out[x] = rgb_to_gray(red.extract(v), green.extract(v), blue.extract(v));
          break;
        }
        case 24:
          out[x] = rgb_to_gray(static_cast<std::uint8_t>(at(3 * x + 2)), static_cast<std::uint8_t>(at(3 * x + 1)),
                               static_cast<std::uint8_t>(at(3 * x)));
          break;
        case 32: {
          const std::uint32_t v = at(4 * x) | (at(4 * x + 1) << 8) | (at(4 * x + 2) << 16) | (at(4 * x + 3) << 24);
          out[x] = rgb_to_gray(red.extract(v), green.extract(v), blue.extract(v));
          break;
        }
      }
    }
  }
  return ImageRecord(std::move(name), w, h, BitDepth::k8, std::move(pixels));
}

}  // namespace histoscope::codec
