#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "canvas.hpp"
#include "histoscope/error.hpp"
#include "histoscope/png.hpp"

namespace histoscope {
namespace {

using plot::Canvas;

constexpr Rgb kInk{0x20, 0x20, 0x20};
constexpr Rgb kGrid{0xe4, 0xe4, 0xe4};
constexpr Rgb kMuted{0x60, 0x60, 0x60};
constexpr std::uint8_t kFillAlpha = 153;   // 60 %
constexpr std::uint8_t kShadeAlpha = 46;   // range shading
constexpr std::int32_t kMargin = 16;
constexpr std::int32_t kGap = 12;
constexpr int kThumbnailSlots = 5;  // base + first four overlays

int text_scale(const PlotSpec& spec) { return spec.canvas_width >= 1200 ? 2 : 1; }
std::int32_t line_height(int scale) { return Canvas::text_height(scale) + 4 * scale; }

std::string format(const char* pattern, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, pattern, value);
  return buffer;
}

std::string truncate(std::string s, std::size_t max_chars) {
  if (s.size() <= max_chars) return s;
  if (max_chars <= 3) return s.substr(0, max_chars);
  return s.substr(0, max_chars - 3) + "...";
}

std::string compact_count(double v) {
  if (v >= 1e6) return format("%.3g", v);
  return std::to_string(static_cast<std::uint64_t>(std::llround(v)));
}

/// Fraction of the plot height for a bin count under the current y-axis settings.
double bar_fraction(std::uint64_t count, const WorkspaceState& ws) {
  if (count == 0) return 0.0;
  const double limit = static_cast<double>(ws.y_limit());
  if (ws.scale() == ScaleMode::Linear) {
    return std::min(static_cast<double>(count), limit) / limit;
  }
  const double top = ws.y_limit() > 1 ? std::log10(limit) : 1.0;
  return std::min(std::log10(static_cast<double>(count)), top) / top;
}

void draw_axes(Canvas& canvas, const PlotLayout& layout, const WorkspaceState& ws, int scale) {
  const PixelRect& area = layout.plot_area;
  const BitDepth depth = ws.domain_depth();
  const std::int32_t bottom = area.y + area.height - 1;
  const std::int32_t lh = line_height(scale);

  // x ticks
  const std::uint32_t step = depth == BitDepth::k8 ? 50 : 10000;
  for (std::uint32_t v = 0; v <= max_intensity(depth); v += step) {
    const std::int32_t x = layout.column_for(v, depth);
    canvas.vline(x, area.y, bottom, kGrid);
    canvas.vline(x, bottom + 1, bottom + 5, kInk);
    const std::string label = std::to_string(v);
    canvas.text(x - Canvas::text_width(label, scale) / 2, bottom + 8, label, kInk, scale);
  }
  const std::string x_caption = "pixel intensity (" + std::to_string(bits(depth)) + "-bit)";
  canvas.text(area.x + (area.width - Canvas::text_width(x_caption, scale)) / 2, bottom + 8 + lh, x_caption,
              kMuted, scale);

  // y ticks
  std::vector<std::pair<double, std::string>> ticks;
  if (ws.scale() == ScaleMode::Linear) {
    for (int k = 0; k <= 4; ++k) {
      const double value = static_cast<double>(ws.y_limit()) * k / 4.0;
      ticks.emplace_back(k / 4.0, compact_count(value));
    }
  } else {
    const double top = ws.y_limit() > 1 ? std::log10(static_cast<double>(ws.y_limit())) : 1.0;
    for (int e = 0; e <= static_cast<int>(std::floor(top)); ++e) {
      ticks.emplace_back(e / top, e == 0 ? std::string("1") : "1e" + std::to_string(e));
    }
  }
  for (const auto& [fraction, label] : ticks) {
    const std::int32_t y = bottom - static_cast<std::int32_t>(std::lround(fraction * (area.height - 1)));
    canvas.hline(area.x, area.x + area.width - 1, y, kGrid);
    canvas.hline(area.x - 5, area.x - 1, y, kInk);
    canvas.text(area.x - 8 - Canvas::text_width(label, scale), y - Canvas::text_height(scale) / 2, label,
                kInk, scale);
  }
  const std::string y_caption = std::string("pixels per bin (") + std::string(to_string(ws.scale())) +
                                ", limit " + std::to_string(ws.y_limit()) + ")";
  canvas.text(layout.histogram_region.x, layout.histogram_region.y, y_caption, kMuted, scale);
}

void draw_histograms(Canvas& canvas, const PlotLayout& layout, const WorkspaceState& ws) {
  const PixelRect& area = layout.plot_area;
  const std::size_t bins = bin_count(ws.domain_depth());
  const std::int32_t bottom = area.y + area.height - 1;

  // Tallest count per plot column, per layer.
  std::vector<std::vector<std::int32_t>> heights;
  for (const Layer& layer : ws.layers()) {
    const auto counts = layer.histogram->counts();
    std::vector<std::int32_t> column_heights(static_cast<std::size_t>(area.width), -1);
    for (std::int32_t px = 0; px < area.width; ++px) {
      const std::size_t first = static_cast<std::size_t>(px) * bins / area.width;
      std::size_t last = (static_cast<std::size_t>(px) + 1) * bins / area.width;
      last = std::max(last, first + 1);
      const std::uint64_t peak = *std::max_element(counts.begin() + first, counts.begin() + last);
      if (peak == 0) continue;
      const double fraction = bar_fraction(peak, ws);
      column_heights[px] = static_cast<std::int32_t>(std::lround(fraction * (area.height - 1)));
    }
    heights.push_back(std::move(column_heights));
  }

  for (std::size_t i = 0; i < heights.size(); ++i) {
    const Rgb color = palette_color(ws.layers()[i].color_index);
    for (std::int32_t px = 0; px < area.width; ++px) {
      const std::int32_t h = heights[i][px];
      if (h <= 0) continue;
      canvas.fill_rect({area.x + px, bottom - h + 1, 1, h}, color, kFillAlpha);
    }
  }
  // Step outlines on top of every fill, in insertion order.
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const Rgb color = palette_color(ws.layers()[i].color_index);
    std::int32_t previous = -1;
    for (std::int32_t px = 0; px < area.width; ++px) {
      const std::int32_t h = heights[i][px];
      if (h < 0) {
        previous = -1;
        continue;
      }
      const std::int32_t y = bottom - h;
      if (previous >= 0) {
        canvas.vline(area.x + px, bottom - previous, y, color);
      } else {
        canvas.vline(area.x + px, bottom, y, color);
      }
      previous = h;
    }
  }
}

void draw_range(Canvas& canvas, const PlotLayout& layout, const WorkspaceState& ws) {
  const PixelRect& area = layout.plot_area;
  const BitDepth depth = ws.domain_depth();
  const std::int32_t x0 = layout.column_for(ws.range().lo, depth);
  const std::int32_t x1 = layout.column_for(ws.range().hi, depth);
  canvas.fill_rect({x0, area.y, x1 - x0 + 1, area.height}, kRangeBarColor, kShadeAlpha);
  for (const std::int32_t x : {x0, x1}) {
    canvas.vline(x, area.y, area.y + area.height - 1, kRangeBarColor);
    canvas.vline(x + 1, area.y, area.y + area.height - 1, kRangeBarColor);
  }
}

void draw_stats_panel(Canvas& canvas, const PlotLayout& layout, const WorkspaceState& ws, int scale) {
  const PixelRect& panel = layout.stats_panel;
  const std::int32_t lh = line_height(scale);
  const auto max_chars = static_cast<std::size_t>(panel.width / Canvas::text_width("x", scale));
  std::int32_t y = panel.y;
  const auto line = [&](const std::string& s, Rgb color) {
    if (y + lh > panel.y + panel.height) return false;
    canvas.text(panel.x, y, truncate(s, max_chars), color, scale);
    y += lh;
    return true;
  };

  line("Calculations", kInk);
  line("Range: " + std::to_string(ws.range().lo) + " - " + std::to_string(ws.range().hi), kInk);
  y += lh / 2;

  const auto stats = workspace_statistics(ws);
  std::vector<std::size_t> shown{0};
  if (ws.overlay_count() > 0) shown.push_back(ws.layers().size() - 1);
  for (const std::size_t i : shown) {
    const Layer& layer = ws.layers()[i];
    const Rgb color = palette_color(layer.color_index);
    const RangeStatistics& s = stats[i];
    line("Image " + std::to_string(i + 1) + ": " + layer.image->source_name(), color);
    line(" Pixels: " + std::to_string(s.pixel_count), color);
    line(" Percent: " + format("%.4f", s.percent_of_total) + "%", color);
    line(" Entropy: " + format("%.6f", s.entropy_bits) + " bits", color);
    line(" Mean: " + (s.mean ? format("%.4f", *s.mean) : std::string("undefined")), color);
    line(" RMS contrast: " + format("%.6f", s.rms_contrast), color);
    line(" Total: " + std::to_string(s.total_intensity), color);
    y += lh / 2;
  }

  if (ws.overlay_count() > 0) {
    line("Histogram Overlays", kInk);
    for (std::size_t i = 1; i < ws.layers().size(); ++i) {
      const Layer& layer = ws.layers()[i];
      if (!line(layer.image->source_name(), palette_color(layer.color_index))) break;
    }
  }
}

void draw_thumbnails(Canvas& canvas, const PlotLayout& layout, const WorkspaceState& ws, int scale) {
  const PixelRect& column = layout.thumbnails;
  const std::int32_t slot_height = column.height / kThumbnailSlots;
  const std::int32_t lh = line_height(scale);
  const std::size_t shown = std::min<std::size_t>(ws.layers().size(), kThumbnailSlots);

  for (std::size_t i = 0; i < shown; ++i) {
    const Layer& layer = ws.layers()[i];
    const std::int32_t top = column.y + static_cast<std::int32_t>(i) * slot_height;
    canvas.text(column.x, top, "Image " + std::to_string(i + 1), palette_color(layer.color_index), scale);

    const ImageRecord& image = *layer.image;
    const PixelRect box{column.x, top + lh, column.width, slot_height - lh - 6};
    if (box.width <= 0 || box.height <= 0) continue;
    const double zoom = std::min(static_cast<double>(box.width) / image.width(),
                                 static_cast<double>(box.height) / image.height());
    const auto w = std::max<std::int32_t>(1, static_cast<std::int32_t>(image.width() * zoom));
    const auto h = std::max<std::int32_t>(1, static_cast<std::int32_t>(image.height() * zoom));
    const unsigned shift = bits(image.bit_depth()) - 8;
    for (std::int32_t y = 0; y < h; ++y) {
      const auto sy = static_cast<std::uint32_t>(std::min<std::int64_t>(
          static_cast<std::int64_t>(y) * image.height() / h, image.height() - 1));
      for (std::int32_t x = 0; x < w; ++x) {
        const auto sx = static_cast<std::uint32_t>(std::min<std::int64_t>(
            static_cast<std::int64_t>(x) * image.width() / w, image.width() - 1));
        const auto g = static_cast<std::uint8_t>(image.at(sx, sy) >> shift);
        canvas.blend(box.x + x, box.y + y, {g, g, g});
      }
    }
    canvas.outline({box.x - 1, box.y - 1, w + 2, h + 2}, palette_color(layer.color_index));
  }
}

}  // namespace

std::int32_t PlotLayout::column_for(std::uint32_t value, BitDepth depth) const noexcept {
  const double bins = static_cast<double>(bin_count(depth));
  return plot_area.x + static_cast<std::int32_t>(std::floor((value + 0.5) * plot_area.width / bins));
}

PlotLayout compute_layout(const PlotSpec& spec) {
  if (spec.canvas_width < kMinCanvasWidth || spec.canvas_height < kMinCanvasHeight) {
    throw Error(ErrorCode::CanvasTooSmall, "canvas must be at least " + std::to_string(kMinCanvasWidth) + "x" +
                                               std::to_string(kMinCanvasHeight) + ", got " +
                                               std::to_string(spec.canvas_width) + "x" +
                                               std::to_string(spec.canvas_height));
  }
  const auto width = static_cast<std::int32_t>(spec.canvas_width);
  const auto height = static_cast<std::int32_t>(spec.canvas_height);
  const int scale = text_scale(spec);
  const std::int32_t lh = line_height(scale);
  const std::int32_t advance = Canvas::text_width("x", scale);

  PlotLayout layout;
  layout.title = {kMargin, kMargin, width - 2 * kMargin, lh + 8};
  const std::int32_t body_top = layout.title.y + layout.title.height + 8;
  const std::int32_t body_height = height - body_top - kMargin;

  const std::int32_t thumb_width = std::max(width * 16 / 100, 96);
  const std::int32_t stats_width = std::max(width * 21 / 100, 150);
  layout.thumbnails = {width - kMargin - thumb_width, body_top, thumb_width, body_height};
  layout.stats_panel = {layout.thumbnails.x - kGap - stats_width, body_top, stats_width, body_height};
  layout.histogram_region = {kMargin, body_top, layout.stats_panel.x - kGap - kMargin, body_height};

  const std::int32_t left_pad = 7 * advance + 12;
  const std::int32_t top_pad = lh + 8;
  const std::int32_t bottom_pad = 2 * lh + 16;
  layout.plot_area = {layout.histogram_region.x + left_pad, body_top + top_pad,
                      layout.histogram_region.width - left_pad - 12, body_height - top_pad - bottom_pad};
  return layout;
}

RgbaImage render_workspace(const WorkspaceState& ws, const PlotSpec& spec) {
  const PlotLayout layout = compute_layout(spec);
  const int scale = text_scale(spec);
  Canvas canvas(static_cast<std::int32_t>(spec.canvas_width), static_cast<std::int32_t>(spec.canvas_height),
                kBackgroundColor);

  const std::string title = truncate(ws.base().image->source_name(),
                                     static_cast<std::size_t>(layout.title.width / Canvas::text_width("x", scale)));
  canvas.text(layout.title.x + (layout.title.width - Canvas::text_width(title, scale)) / 2, layout.title.y + 4,
              title, kInk, scale);

  draw_axes(canvas, layout, ws, scale);
  draw_histograms(canvas, layout, ws);
  draw_range(canvas, layout, ws);
  const PixelRect& area = layout.plot_area;
  canvas.vline(area.x - 1, area.y, area.y + area.height, kInk);
  canvas.hline(area.x - 1, area.x + area.width - 1, area.y + area.height, kInk);

  draw_stats_panel(canvas, layout, ws, scale);
  draw_thumbnails(canvas, layout, ws, scale);
  return canvas.to_rgba();
}

std::vector<std::byte> render_workspace_png(const WorkspaceState& ws, const PlotSpec& spec) {
  const RgbaImage image = render_workspace(ws, spec);
  return encode_png_rgba(image.width, image.height, image.rgba);
}

}  // namespace histoscope
