#include "canvas.hpp"

#include <algorithm>

#include "font5x7.hpp"

namespace histoscope::plot {

Canvas::Canvas(std::int32_t width, std::int32_t height, Rgb background)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height, background) {}

void Canvas::blend(std::int32_t x, std::int32_t y, Rgb color, std::uint8_t alpha) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  Rgb& dst = pixels_[static_cast<std::size_t>(y) * width_ + x];
  if (alpha == 255) {
    dst = color;
    return;
  }
  const auto mix = [alpha](std::uint8_t src, std::uint8_t under) {
    return static_cast<std::uint8_t>((src * alpha + under * (255 - alpha) + 127) / 255);
  };
  dst = {mix(color.r, dst.r), mix(color.g, dst.g), mix(color.b, dst.b)};
}

void Canvas::fill_rect(const PixelRect& rect, Rgb color, std::uint8_t alpha) {
  const std::int32_t x0 = std::max(rect.x, 0);
  const std::int32_t y0 = std::max(rect.y, 0);
  const std::int32_t x1 = std::min(rect.x + rect.width, width_);
  const std::int32_t y1 = std::min(rect.y + rect.height, height_);
  for (std::int32_t y = y0; y < y1; ++y) {
    for (std::int32_t x = x0; x < x1; ++x) blend(x, y, color, alpha);
  }
}

void Canvas::hline(std::int32_t x0, std::int32_t x1, std::int32_t y, Rgb color) {
  if (x0 > x1) std::swap(x0, x1);
  for (std::int32_t x = x0; x <= x1; ++x) blend(x, y, color);
}

void Canvas::vline(std::int32_t x, std::int32_t y0, std::int32_t y1, Rgb color) {
  if (y0 > y1) std::swap(y0, y1);
  for (std::int32_t y = y0; y <= y1; ++y) blend(x, y, color);
}

void Canvas::outline(const PixelRect& rect, Rgb color) {
  hline(rect.x, rect.x + rect.width - 1, rect.y, color);
  hline(rect.x, rect.x + rect.width - 1, rect.y + rect.height - 1, color);
  vline(rect.x, rect.y, rect.y + rect.height - 1, color);
  vline(rect.x + rect.width - 1, rect.y, rect.y + rect.height - 1, color);
}

void Canvas::text(std::int32_t x, std::int32_t y, std::string_view s, Rgb color, int scale) {
  for (const char ch : s) {
    const auto code = static_cast<unsigned char>(ch);
    const auto& glyph = kFont5x7[(code >= 0x20 && code <= 0x7E) ? code - 0x20 : '?' - 0x20];
    for (int col = 0; col < kGlyphWidth; ++col) {
      for (int row = 0; row < kGlyphHeight; ++row) {
        if (((glyph[col] >> row) & 1) == 0) continue;
        fill_rect({x + col * scale, y + row * scale, scale, scale}, color);
      }
    }
    x += kGlyphAdvance * scale;
  }
}

std::int32_t Canvas::text_width(std::string_view s, int scale) noexcept {
  return static_cast<std::int32_t>(s.size()) * kGlyphAdvance * scale;
}

std::int32_t Canvas::text_height(int scale) noexcept { return kGlyphHeight * scale; }

RgbaImage Canvas::to_rgba() const {
  RgbaImage out;
  out.width = static_cast<std::uint32_t>(width_);
  out.height = static_cast<std::uint32_t>(height_);
  out.rgba.resize(pixels_.size() * 4);
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    out.rgba[4 * i] = pixels_[i].r;
    out.rgba[4 * i + 1] = pixels_[i].g;
    out.rgba[4 * i + 2] = pixels_[i].b;
    out.rgba[4 * i + 3] = 255;
  }
  return out;
}

}  // namespace histoscope::plot
