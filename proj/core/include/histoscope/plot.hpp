#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "histoscope/palette.hpp"
#include "histoscope/workspace.hpp"

namespace histoscope {

struct PlotSpec {
  std::uint32_t canvas_width = 1600;
  std::uint32_t canvas_height = 900;
};

inline constexpr std::uint32_t kMinCanvasWidth = 640;
inline constexpr std::uint32_t kMinCanvasHeight = 480;

struct PixelRect {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t width = 0;
  std::int32_t height = 0;

  bool contains(std::int32_t px, std::int32_t py) const noexcept {
    return px >= x && py >= y && px < x + width && py < y + height;
  }
};

/// Fixed geometry of the histogram-workspace plot for a canvas size.
/// histogram_region holds everything that depends on scale or y-limit (data
/// area, axes, tick labels); stats_panel and thumbnails never do.
struct PlotLayout {
  PixelRect title;
  PixelRect histogram_region;
  PixelRect plot_area;
  PixelRect stats_panel;
  PixelRect thumbnails;

  /// Canvas column of the centre of the bin for `value`.
  std::int32_t column_for(std::uint32_t value, BitDepth depth) const noexcept;
};

/// Throws ErrorCode::CanvasTooSmall below 640x480.
PlotLayout compute_layout(const PlotSpec& spec);

/// Colors used outside the palette; exposed for pixel-sampling tests.
inline constexpr Rgb kRangeBarColor{0x1a, 0x3f, 0xbf};
inline constexpr Rgb kBackgroundColor{0xff, 0xff, 0xff};

/// Straight-alpha RGBA8 raster of the plot, row-major.
struct RgbaImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> rgba;

  Rgb rgb_at(std::uint32_t x, std::uint32_t y) const noexcept {
    const std::size_t i = (std::size_t{y} * width + x) * 4;
    return {rgba[i], rgba[i + 1], rgba[i + 2]};
  }
};

RgbaImage render_workspace(const WorkspaceState& ws, const PlotSpec& spec = {});

/// render_workspace encoded as an 8-bit RGBA, non-interlaced PNG. The only
/// metadata is a Software text chunk with the tool name and version.
std::vector<std::byte> render_workspace_png(const WorkspaceState& ws, const PlotSpec& spec = {});

}  // namespace histoscope
