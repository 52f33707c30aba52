#include "histoscope/workspace.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <string>

#include "histoscope/error.hpp"

namespace histoscope {

std::string_view to_string(ScaleMode mode) noexcept {
  return mode == ScaleMode::Log10 ? "log10" : "linear";
}

ScaleMode parse_scale_mode(std::string_view text) {
  if (text == "linear") return ScaleMode::Linear;
  if (text == "log10" || text == "log") return ScaleMode::Log10;
  throw std::invalid_argument("scale must be 'linear' or 'log10', got '" + std::string(text) + "'");
}

bool operator==(const WorkspaceState& a, const WorkspaceState& b) {
  if (a.scale_ != b.scale_ || a.y_limit_ != b.y_limit_ || a.range_ != b.range_ ||
      a.layers_.size() != b.layers_.size()) {
    return false;
  }
  return std::equal(a.layers_.begin(), a.layers_.end(), b.layers_.begin(), [](const Layer& x, const Layer& y) {
    return x.color_index == y.color_index && *x.image == *y.image;
  });
}

namespace {

Layer make_layer(std::shared_ptr<const ImageRecord> image, std::size_t color) {
  auto histogram = std::make_shared<const Histogram>(build_histogram(*image));
  return Layer{std::move(image), std::move(histogram), color};
}

std::uint32_t clamp_to_domain(std::int64_t v, BitDepth depth) {
  return static_cast<std::uint32_t>(std::clamp<std::int64_t>(v, 0, max_intensity(depth)));
}

std::int64_t parse_integer_field(std::string_view text) {
  const auto blank = [](char c) { return c == ' ' || c == '\t'; };
  while (!text.empty() && blank(text.front())) text.remove_prefix(1);
  while (!text.empty() && blank(text.back())) text.remove_suffix(1);
  if (text.starts_with('+')) text.remove_prefix(1);
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  const bool consumed = !text.empty() && end == text.data() + text.size();
  if (consumed && ec == std::errc::result_out_of_range) {
    // Still an integer, just far outside any domain; clamping handles it.
    return text.starts_with('-') ? std::numeric_limits<std::int64_t>::min() : std::numeric_limits<std::int64_t>::max();
  }
  if (!consumed || ec != std::errc()) {
    throw Error(ErrorCode::NonInteger, "'" + std::string(text) + "' is not an integer intensity");
  }
  return value;
}

}  // namespace

WorkspaceState create_workspace(std::shared_ptr<const ImageRecord> image) {
  if (!image) throw std::invalid_argument("create_workspace: null image");
  WorkspaceState ws;
  ws.layers_.push_back(make_layer(std::move(image), 0));
  const Histogram& hist = *ws.layers_.front().histogram;
  ws.scale_ = ScaleMode::Linear;
  ws.y_limit_ = hist.max_count();
  // Every ImageRecord holds at least one pixel, so both bounds exist.
  ws.range_ = {*hist.min_present(), *hist.max_present()};
  return ws;
}

WorkspaceState create_workspace(ImageRecord image) {
  return create_workspace(std::make_shared<const ImageRecord>(std::move(image)));
}

WorkspaceState add_overlay(const WorkspaceState& ws, std::shared_ptr<const ImageRecord> image) {
  if (!image) throw std::invalid_argument("add_overlay: null image");
  if (ws.overlay_count() >= WorkspaceState::kMaxOverlays) {
    throw Error(ErrorCode::OverlayLimitExceeded,
                "cannot overlay " + image->source_name() + ": at most " +
                    std::to_string(WorkspaceState::kMaxOverlays) + " overlays are supported");
  }
  if (image->bit_depth() != ws.domain_depth()) {
    throw Error(ErrorCode::DepthMismatch,
                "cannot overlay " + std::to_string(bits(image->bit_depth())) + "-bit image " +
                    image->source_name() + " on a " + std::to_string(bits(ws.domain_depth())) +
                    "-bit base image");
  }
  WorkspaceState next = ws;
  next.layers_.push_back(make_layer(std::move(image), ws.layers_.size()));
  return next;
}

WorkspaceState add_overlay(const WorkspaceState& ws, ImageRecord image) {
  return add_overlay(ws, std::make_shared<const ImageRecord>(std::move(image)));
}

WorkspaceState clear_overlays(const WorkspaceState& ws) { return create_workspace(ws.base().image); }

WorkspaceState set_range(const WorkspaceState& ws, std::int64_t lo, std::int64_t hi) {
  WorkspaceState next = ws;
  const BitDepth depth = ws.domain_depth();
  next.range_ = {clamp_to_domain(std::min(lo, hi), depth), clamp_to_domain(std::max(lo, hi), depth)};
  return next;
}

WorkspaceState set_range(const WorkspaceState& ws, std::string_view lo, std::string_view hi) {
  const std::int64_t lo_value = parse_integer_field(lo);
  const std::int64_t hi_value = parse_integer_field(hi);
  return set_range(ws, lo_value, hi_value);
}

WorkspaceState apply_click(const WorkspaceState& ws, double x) {
  if (std::isnan(x)) return ws;
  const double top = max_intensity(ws.domain_depth());
  const auto v = static_cast<std::int64_t>(std::round(std::clamp(x, 0.0, top)));

  WorkspaceState next = ws;
  auto lo = static_cast<std::int64_t>(ws.range_.lo);
  auto hi = static_cast<std::int64_t>(ws.range_.hi);
  if (std::abs(v - lo) <= std::abs(v - hi)) {
    lo = v;
  } else {
    hi = v;
  }
  next.range_ = {static_cast<std::uint32_t>(std::min(lo, hi)), static_cast<std::uint32_t>(std::max(lo, hi))};
  return next;
}

WorkspaceState set_scale(const WorkspaceState& ws, ScaleMode mode) {
  WorkspaceState next = ws;
  next.scale_ = mode;
  return next;
}

WorkspaceState set_y_limit(const WorkspaceState& ws, std::int64_t limit) {
  if (limit < 1) {
    throw Error(ErrorCode::InvalidLimit, "y-axis limit must be at least 1, got " + std::to_string(limit));
  }
  WorkspaceState next = ws;
  next.y_limit_ = static_cast<std::uint64_t>(limit);
  return next;
}

std::vector<RangeStatistics> workspace_statistics(const WorkspaceState& ws) {
  std::vector<RangeStatistics> out;
  out.reserve(ws.layers().size());
  for (const Layer& layer : ws.layers()) out.push_back(range_stats(*layer.histogram, ws.range()));
  return out;
}

}  // namespace histoscope
