#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "histoscope/palette.hpp"
#include "histoscope/plot.hpp"

namespace histoscope::plot {

/// RGB raster with clipped drawing primitives. Blending is integer-only so
/// output is bit-reproducible.
class Canvas {
 public:
  Canvas(std::int32_t width, std::int32_t height, Rgb background);

  std::int32_t width() const noexcept { return width_; }
  std::int32_t height() const noexcept { return height_; }

  /// alpha in [0, 255]
  void blend(std::int32_t x, std::int32_t y, Rgb color, std::uint8_t alpha = 255);
  void fill_rect(const PixelRect& rect, Rgb color, std::uint8_t alpha = 255);
  void hline(std::int32_t x0, std::int32_t x1, std::int32_t y, Rgb color);
  void vline(std::int32_t x, std::int32_t y0, std::int32_t y1, Rgb color);
  void outline(const PixelRect& rect, Rgb color);

  /// Draws from the top-left corner; each font pixel becomes scale x scale.
  void text(std::int32_t x, std::int32_t y, std::string_view s, Rgb color, int scale);
  static std::int32_t text_width(std::string_view s, int scale) noexcept;
  static std::int32_t text_height(int scale) noexcept;

  RgbaImage to_rgba() const;

 private:
  std::int32_t width_;
  std::int32_t height_;
  std::vector<Rgb> pixels_;
};

}  // namespace histoscope::plot
