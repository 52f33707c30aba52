#include "histoscope/palette.hpp"

#include <cstdio>
#include <stdexcept>

namespace histoscope {

const std::array<Rgb, kPaletteSize>& palette() noexcept {
  static constexpr std::array<Rgb, kPaletteSize> kColors{{
      {0x1f, 0x77, 0xb4},  // blue (base image)
      {0xff, 0x7f, 0x0e},  // orange
      {0x2c, 0xa0, 0x2c},  // green
      {0xd6, 0x27, 0x28},  // red
      {0x94, 0x67, 0xbd},  // purple
      {0x8c, 0x56, 0x4b},  // brown
      {0xe3, 0x77, 0xc2},  // pink
      {0x7f, 0x7f, 0x7f},  // gray
      {0xbc, 0xbd, 0x22},  // olive
      {0x17, 0xbe, 0xcf},  // cyan
      {0x00, 0x00, 0x75},  // navy
      {0xf0, 0x32, 0xe6},  // magenta
      {0xff, 0xe1, 0x19},  // yellow
      {0x46, 0x99, 0x90},  // teal
      {0x80, 0x00, 0x00},  // maroon
      {0xaa, 0xff, 0xc3},  // mint
      {0x80, 0x80, 0x00},  // dark olive
      {0xff, 0xd8, 0xb1},  // apricot
      {0xdc, 0xbe, 0xff},  // lavender
      {0x00, 0x00, 0x00},  // black
      {0xfa, 0xbe, 0xd4},  // light pink
      {0xbf, 0xef, 0x45},  // lime
      {0x91, 0x1e, 0xb4},  // violet
  }};
  return kColors;
}

Rgb palette_color(std::size_t index) {
  if (index >= kPaletteSize) throw std::out_of_range("palette index out of range");
  return palette()[index];
}

std::string to_hex(Rgb color) {
  char buffer[8];
  std::snprintf(buffer, sizeof buffer, "#%02x%02x%02x", color.r, color.g, color.b);
  return buffer;
}

}  // namespace histoscope
