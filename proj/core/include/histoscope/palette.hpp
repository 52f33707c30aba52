#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace histoscope {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr std::size_t kPaletteSize = 23;

/// Curve colors in assignment order: index 0 (blue) is the base image, 1 is
/// orange, 2 is green, and the rest continue with high-contrast hues.
const std::array<Rgb, kPaletteSize>& palette() noexcept;

Rgb palette_color(std::size_t index);

/// "#rrggbb"
std::string to_hex(Rgb color);

}  // namespace histoscope
