#include <algorithm>
#include <array>
#include <vector>

#include "codecs.hpp"

namespace histoscope::codec {
namespace {

constexpr std::size_t kMaxCodes = 4096;

using ColorTable = std::vector<std::array<std::uint8_t, 3>>;

ColorTable read_color_table(ByteReader& in, unsigned size_bits) {
  ColorTable table(std::size_t{1} << (size_bits + 1));
  for (auto& entry : table) {
    entry[0] = in.u8();
    entry[1] = in.u8();
    entry[2] = in.u8();
  }
  return table;
}

std::vector<std::uint8_t> read_sub_blocks(ByteReader& in) {
  std::vector<std::uint8_t> data;
  for (std::uint8_t length = in.u8(); length != 0; length = in.u8()) {
    for (const std::byte b : in.take(length)) data.push_back(static_cast<std::uint8_t>(b));
  }
  return data;
}

void skip_sub_blocks(ByteReader& in) {
  for (std::uint8_t length = in.u8(); length != 0; length = in.u8()) in.skip(length);
}

/// Variable-width LZW as used by GIF. Stops at the end-of-information code,
/// at the end of data, or once `expected` indices have been produced.
std::vector<std::uint8_t> lzw_decode(const std::vector<std::uint8_t>& data, unsigned min_code_size,
                                     std::size_t expected, const std::string& name) {
  if (min_code_size < 2 || min_code_size > 8) corrupt(name, "invalid LZW minimum code size");

  const unsigned clear_code = 1u << min_code_size;
  const unsigned end_code = clear_code + 1;

  std::array<std::uint16_t, kMaxCodes> prefix{};
  std::array<std::uint8_t, kMaxCodes> suffix{};
  std::array<std::uint8_t, kMaxCodes + 1> stack{};
  for (unsigned i = 0; i < clear_code; ++i) suffix[i] = static_cast<std::uint8_t>(i);

  unsigned code_size = min_code_size + 1;
  unsigned next_code = clear_code + 2;
  int previous = -1;
  std::uint8_t first_char = 0;

  std::vector<std::uint8_t> out;
  out.reserve(expected);

  std::uint32_t bit_buffer = 0;
  unsigned bit_count = 0;
  std::size_t pos = 0;

  while (out.size() < expected) {
    while (bit_count < code_size && pos < data.size()) {
      bit_buffer |= std::uint32_t{data[pos++]} << bit_count;
      bit_count += 8;
    }
    if (bit_count < code_size) break;
    unsigned code = bit_buffer & ((1u << code_size) - 1);
    bit_buffer >>= code_size;
    bit_count -= code_size;

    if (code == clear_code) {
      code_size = min_code_size + 1;
      next_code = clear_code + 2;
      previous = -1;
      continue;
    }
    if (code == end_code) break;

    if (previous < 0) {
      if (code >= clear_code) corrupt(name, "invalid LZW code");
      first_char = static_cast<std::uint8_t>(code);
      out.push_back(first_char);
      previous = static_cast<int>(code);
      continue;
    }

    const unsigned incoming = code;
    std::size_t depth = 0;
    if (code > next_code) corrupt(name, "invalid LZW code");
    if (code == next_code) {
      stack[depth++] = first_char;
      code = static_cast<unsigned>(previous);
    }
    while (code >= clear_code) {
      stack[depth++] = suffix[code];
      code = prefix[code];
    }
    first_char = suffix[code];
    stack[depth++] = first_char;
    while (depth > 0 && out.size() < expected) out.push_back(stack[--depth]);

    if (next_code < kMaxCodes) {
      prefix[next_code] = static_cast<std::uint16_t>(previous);
      suffix[next_code] = first_char;
      ++next_code;
      if (next_code == (1u << code_size) && code_size < 12) ++code_size;
    }
    previous = static_cast<int>(incoming);
  }
  // Short data: remaining pixels take index 0, as most viewers do.
  out.resize(expected, 0);
  return out;
}

std::vector<std::uint8_t> deinterlace(const std::vector<std::uint8_t>& indices, std::uint32_t width,
                                      std::uint32_t height) {
  std::vector<std::uint8_t> rows(indices.size());
  constexpr std::array<std::uint32_t, 4> kStart{0, 4, 2, 1};
  constexpr std::array<std::uint32_t, 4> kStep{8, 8, 4, 2};
  std::size_t source_row = 0;
  for (std::size_t pass = 0; pass < 4; ++pass) {
    for (std::uint32_t y = kStart[pass]; y < height; y += kStep[pass]) {
      std::copy_n(indices.begin() + static_cast<std::ptrdiff_t>(source_row * width), width,
                  rows.begin() + static_cast<std::ptrdiff_t>(std::size_t{y} * width));
      ++source_row;
    }
  }
  return rows;
}

}  // namespace

ImageRecord decode_gif(std::span<const std::byte> bytes, std::string name) {
  ByteReader in(bytes, name);
  const auto signature = in.take(6);
  const auto sig = [&](std::size_t i) { return static_cast<char>(signature[i]); };
  if (sig(0) != 'G' || sig(1) != 'I' || sig(2) != 'F' || sig(3) != '8' ||
      (sig(4) != '7' && sig(4) != '9') || sig(5) != 'a') {
    throw Error(ErrorCode::UnsupportedFormat, name + ": not a GIF file");
  }

  std::uint32_t screen_width = in.u16();
  std::uint32_t screen_height = in.u16();
  const std::uint8_t screen_flags = in.u8();
  const std::uint8_t background_index = in.u8();
  in.skip(1);  // pixel aspect ratio

  ColorTable global_table;
  if ((screen_flags & 0x80) != 0) global_table = read_color_table(in, screen_flags & 0x07);

  while (true) {
    const std::uint8_t block = in.u8();
    if (block == 0x3B) corrupt(name, "GIF contains no image");
    if (block == 0x21) {
      in.skip(1);  // extension label
      skip_sub_blocks(in);
      continue;
    }
    if (block != 0x2C) corrupt(name, "unknown GIF block");

    // First image descriptor: decode it and stop. Later frames are ignored.
    const std::uint32_t left = in.u16();
    const std::uint32_t top = in.u16();
    const std::uint32_t width = in.u16();
    const std::uint32_t height = in.u16();
    const std::uint8_t flags = in.u8();
    if (width == 0 || height == 0) corrupt(name, "GIF frame has zero size");
    check_dimensions(name, width, height);

    ColorTable local_table;
    if ((flags & 0x80) != 0) local_table = read_color_table(in, flags & 0x07);
    const ColorTable& table = local_table.empty() ? global_table : local_table;
    if (table.empty()) corrupt(name, "GIF frame has no color table");

    const unsigned min_code_size = in.u8();
    const auto data = read_sub_blocks(in);
    auto indices = lzw_decode(data, min_code_size, std::size_t{width} * height, name);
    if ((flags & 0x40) != 0) indices = deinterlace(indices, width, height);

    if (screen_width == 0 || screen_height == 0) {
      screen_width = left + width;
      screen_height = top + height;
    }
    check_dimensions(name, screen_width, screen_height);
    const auto gray_of = [](const ColorTable& t, std::size_t index) -> std::uint16_t {
      if (index >= t.size()) return 0;
      return rgb_to_gray(t[index][0], t[index][1], t[index][2]);
    };
    const std::uint16_t background = global_table.empty() ? 0 : gray_of(global_table, background_index);

    std::vector<std::uint16_t> pixels(std::size_t{screen_width} * screen_height, background);
    for (std::uint32_t y = 0; y < height && top + y < screen_height; ++y) {
      for (std::uint32_t x = 0; x < width && left + x < screen_width; ++x) {
        pixels[std::size_t{top + y} * screen_width + left + x] =
            gray_of(table, indices[std::size_t{y} * width + x]);
      }
    }
    return ImageRecord(std::move(name), screen_width, screen_height, BitDepth::k8, std::move(pixels));
  }
}

}  // namespace histoscope::codec
