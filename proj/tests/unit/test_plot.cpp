#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "histoscope/error.hpp"
#include "histoscope/ingest.hpp"
#include "histoscope/plot.hpp"

namespace histoscope {
namespace {

using testing::image_from;

ImageRecord blob(std::uint16_t centre, std::string name) {
  std::vector<std::uint16_t> pixels;
  for (int d = -6; d <= 6; ++d) {
    for (int k = 0; k < 40 - 5 * std::abs(d); ++k) pixels.push_back(static_cast<std::uint16_t>(centre + d));
  }
  const auto n = static_cast<std::uint32_t>(pixels.size());
  return image_from(std::move(pixels), n, 1, BitDepth::k8, std::move(name));
}

WorkspaceState four_curves() {
  WorkspaceState ws = create_workspace(blob(30, "base.png"));
  ws = add_overlay(ws, blob(90, "o1.png"));
  ws = add_overlay(ws, blob(150, "o2.png"));
  ws = add_overlay(ws, blob(210, "o3.png"));
  return ws;
}

bool same(Rgb a, Rgb b) { return a.r == b.r && a.g == b.g && a.b == b.b; }

TEST(Layout, MinimumCanvas) {
  for (const auto [w, h] : {std::pair{639u, 480u}, std::pair{640u, 479u}, std::pair{10u, 10u}}) {
    try {
      compute_layout({w, h});
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CanvasTooSmall);
    }
  }
  EXPECT_NO_THROW(compute_layout({640, 480}));
  EXPECT_THROW(render_workspace_png(four_curves(), {320, 200}), Error);
}

TEST(Layout, RegionsAreDisjointAndInsideCanvas) {
  for (const PlotSpec spec : {PlotSpec{}, PlotSpec{640, 480}, PlotSpec{2400, 1200}}) {
    const PlotLayout layout = compute_layout(spec);
    const PixelRect canvas{0, 0, static_cast<std::int32_t>(spec.canvas_width),
                           static_cast<std::int32_t>(spec.canvas_height)};
    for (const PixelRect& r : {layout.title, layout.histogram_region, layout.stats_panel, layout.thumbnails}) {
      EXPECT_TRUE(canvas.contains(r.x, r.y));
      EXPECT_TRUE(canvas.contains(r.x + r.width - 1, r.y + r.height - 1));
    }
    EXPECT_LE(layout.histogram_region.x + layout.histogram_region.width, layout.stats_panel.x);
    EXPECT_LE(layout.stats_panel.x + layout.stats_panel.width, layout.thumbnails.x);
    EXPECT_TRUE(layout.histogram_region.contains(layout.plot_area.x, layout.plot_area.y));
    EXPECT_GE(layout.plot_area.width, 256);
  }
}

TEST(Layout, ColumnsAreMonotone) {
  const PlotLayout layout = compute_layout({});
  for (std::uint32_t v = 1; v < 256; ++v) {
    EXPECT_GT(layout.column_for(v, BitDepth::k8), layout.column_for(v - 1, BitDepth::k8));
  }
  EXPECT_GE(layout.column_for(0, BitDepth::k16), layout.plot_area.x);
  EXPECT_LT(layout.column_for(65535, BitDepth::k16), layout.plot_area.x + layout.plot_area.width);
}

TEST(Render, DimensionsAndRoundTrip) {
  const WorkspaceState ws = create_workspace(image_from({0, 0, 255, 255}, 2, 2, BitDepth::k8, "fixture.png"));
  const PlotSpec spec{800, 600};
  const auto png = render_workspace_png(ws, spec);
  const ImageRecord decoded = decode_image(png, "plot.png");
  EXPECT_EQ(decoded.width(), 800u);
  EXPECT_EQ(decoded.height(), 600u);
  EXPECT_EQ(decoded.bit_depth(), BitDepth::k8);

  const RgbaImage raster = render_workspace(ws, spec);
  for (std::uint32_t y = 0; y < raster.height; y += 37) {
    for (std::uint32_t x = 0; x < raster.width; x += 41) {
      const Rgb c = raster.rgb_at(x, y);
      ASSERT_EQ(decoded.at(x, y), rgb_to_gray(c.r, c.g, c.b));
    }
  }
}

TEST(Render, ByteIdenticalAcrossRuns) {
  std::mt19937_64 rng(1);
  WorkspaceState ws = create_workspace(testing::random_image(rng, 64, 64, BitDepth::k16, "deep.tif"));
  ws = add_overlay(ws, testing::clustered_image(rng, 32, 32, BitDepth::k16, "o.tif"));
  ws = set_scale(set_range(ws, 1000, 50000), ScaleMode::Log10);
  EXPECT_EQ(render_workspace_png(ws), render_workspace_png(ws));
  EXPECT_EQ(render_workspace_png(four_curves(), {640, 480}), render_workspace_png(four_curves(), {640, 480}));
}

TEST(Render, MetadataIsSoftwareOnly) {
  const auto png = render_workspace_png(four_curves(), {640, 480});
  std::set<std::string> chunks;
  std::size_t pos = 8;
  while (pos + 8 <= png.size()) {
    const auto len = (std::to_integer<std::uint32_t>(png[pos]) << 24) |
                     (std::to_integer<std::uint32_t>(png[pos + 1]) << 16) |
                     (std::to_integer<std::uint32_t>(png[pos + 2]) << 8) | std::to_integer<std::uint32_t>(png[pos + 3]);
    std::string type;
    for (int i = 4; i < 8; ++i) type.push_back(static_cast<char>(png[pos + i]));
    chunks.insert(type);
    if (type == "tEXt") {
      std::string text;
      for (std::uint32_t i = 0; i < len; ++i) text.push_back(static_cast<char>(png[pos + 8 + i]));
      EXPECT_EQ(text.rfind(std::string("Software\0histoscope", 19), 0), 0u) << text;
    }
    pos += 12 + len;
  }
  EXPECT_EQ(chunks, (std::set<std::string>{"IHDR", "IDAT", "IEND", "tEXt"}));
  // 8-bit RGBA, not interlaced
  EXPECT_EQ(std::to_integer<int>(png[24]), 8);
  EXPECT_EQ(std::to_integer<int>(png[25]), 6);
  EXPECT_EQ(std::to_integer<int>(png[28]), 0);
}

TEST(Render, RangeBarsAtBounds) {
  const WorkspaceState ws = set_range(create_workspace(image_from({0, 0, 255, 255}, 2, 2)), 61, 255);
  const PlotSpec spec{};
  const PlotLayout layout = compute_layout(spec);
  const RgbaImage raster = render_workspace(ws, spec);
  const auto y = static_cast<std::uint32_t>(layout.plot_area.y + layout.plot_area.height / 3);
  for (const std::uint32_t v : {61u, 255u}) {
    const auto x = static_cast<std::uint32_t>(layout.column_for(v, BitDepth::k8));
    EXPECT_TRUE(same(raster.rgb_at(x, y), kRangeBarColor)) << v;
    EXPECT_TRUE(same(raster.rgb_at(x + 1, y), kRangeBarColor)) << v;
  }
  // Shaded between the bars, plain background outside them.
  const auto inside = static_cast<std::uint32_t>(layout.column_for(150, BitDepth::k8));
  const auto outside = static_cast<std::uint32_t>(layout.column_for(30, BitDepth::k8));
  EXPECT_FALSE(same(raster.rgb_at(inside, y), kBackgroundColor));
  EXPECT_FALSE(same(raster.rgb_at(inside, y), kRangeBarColor));
  EXPECT_TRUE(same(raster.rgb_at(outside, y), kBackgroundColor));
}

TEST(Render, FourCurveColorsInPlotArea) {
  const WorkspaceState ws = set_range(four_curves(), 250, 255);
  const PlotSpec spec{};
  const PlotLayout layout = compute_layout(spec);
  const RgbaImage raster = render_workspace(ws, spec);
  std::map<std::size_t, int> census;
  for (std::int32_t y = layout.plot_area.y; y < layout.plot_area.y + layout.plot_area.height; ++y) {
    for (std::int32_t x = layout.plot_area.x; x < layout.plot_area.x + layout.plot_area.width; ++x) {
      const Rgb c = raster.rgb_at(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
      for (const Layer& layer : ws.layers()) {
        if (same(c, palette_color(layer.color_index))) ++census[layer.color_index];
      }
    }
  }
  ASSERT_EQ(census.size(), 4u);
  for (const auto& [index, n] : census) EXPECT_GT(n, 20) << index;
}

TEST(Render, ScaleChangesOnlyHistogramRegion) {
  WorkspaceState linear = set_range(four_curves(), 20, 100);
  linear = set_y_limit(linear, 120);
  const WorkspaceState logged = set_scale(linear, ScaleMode::Log10);
  for (const PlotSpec spec : {PlotSpec{}, PlotSpec{640, 480}}) {
    const PlotLayout layout = compute_layout(spec);
    const RgbaImage a = render_workspace(linear, spec);
    const RgbaImage b = render_workspace(logged, spec);
    bool histogram_differs = false;
    for (std::uint32_t y = 0; y < a.height; ++y) {
      for (std::uint32_t x = 0; x < a.width; ++x) {
        const bool differs = !same(a.rgb_at(x, y), b.rgb_at(x, y));
        if (!differs) continue;
        if (layout.histogram_region.contains(static_cast<std::int32_t>(x), static_cast<std::int32_t>(y))) {
          histogram_differs = true;
        } else {
          FAIL() << "pixel outside histogram region changed at " << x << "," << y;
        }
      }
    }
    EXPECT_TRUE(histogram_differs);
  }
}

TEST(Render, LogScaleSkipsEmptyBins) {
  // One populated bin: under log10 with the tallest bin at the limit, only
  // that bin's column may be painted in the curve color.
  const WorkspaceState ws = set_range(set_scale(create_workspace(image_from({100, 100, 100}, 3, 1)), ScaleMode::Log10),
                                      0, 0);
  const PlotSpec spec{};
  const PlotLayout layout = compute_layout(spec);
  const RgbaImage raster = render_workspace(ws, spec);
  const Rgb blue = palette_color(0);
  const std::int32_t x100 = layout.column_for(100, BitDepth::k8);
  for (std::int32_t x = layout.plot_area.x + 4; x < layout.plot_area.x + layout.plot_area.width; ++x) {
    const bool painted = same(raster.rgb_at(static_cast<std::uint32_t>(x),
                                            static_cast<std::uint32_t>(layout.plot_area.y + layout.plot_area.height - 2)),
                              blue);
    if (std::abs(x - x100) > 4) ASSERT_FALSE(painted) << x;
  }
}

TEST(Render, ManyOverlaysAndSixteenBit) {
  std::mt19937_64 rng(2);
  WorkspaceState ws = create_workspace(testing::random_image(rng, 20, 20, BitDepth::k8, "a-very-long-file-name-that-needs-truncation-in-the-title-and-panel.png"));
  for (std::size_t i = 0; i < WorkspaceState::kMaxOverlays; ++i) {
    ws = add_overlay(ws, testing::clustered_image(rng, 10, 10, BitDepth::k8, "overlay" + std::to_string(i)));
  }
  EXPECT_NO_THROW(decode_image(render_workspace_png(ws, {640, 480}), "p.png"));
  EXPECT_NO_THROW(decode_image(render_workspace_png(ws), "p.png"));
  const WorkspaceState deep = create_workspace(image_from({0, 65535}, 2, 1, BitDepth::k16));
  EXPECT_NO_THROW(decode_image(render_workspace_png(set_scale(deep, ScaleMode::Log10)), "p.png"));
}

}  // namespace
}  // namespace histoscope
