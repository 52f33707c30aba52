#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "histoscope/histogram.hpp"
#include "histoscope/image.hpp"

namespace histoscope {

enum class ScaleMode { Linear, Log10 };

std::string_view to_string(ScaleMode mode) noexcept;

/// Parses "linear" or "log10"; throws std::invalid_argument otherwise.
ScaleMode parse_scale_mode(std::string_view text);

/// One plotted image: its pixels, histogram and palette slot.
struct Layer {
  std::shared_ptr<const ImageRecord> image;
  std::shared_ptr<const Histogram> histogram;
  std::size_t color_index = 0;
};

/// The histogram workspace: a base image, up to 22 overlays drawn on the same
/// axes, the y-axis display settings and the active intensity range.
///
/// A value type. Every operation below returns a new state; images and
/// histograms are shared immutably between copies.
class WorkspaceState {
 public:
  static constexpr std::size_t kMaxOverlays = 22;

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  const Layer& base() const noexcept { return layers_.front(); }
  std::size_t overlay_count() const noexcept { return layers_.size() - 1; }

  ScaleMode scale() const noexcept { return scale_; }
  std::uint64_t y_limit() const noexcept { return y_limit_; }
  IntensityRange range() const noexcept { return range_; }
  BitDepth domain_depth() const noexcept { return base().image->bit_depth(); }

  /// Compares image contents, not pointer identity.
  friend bool operator==(const WorkspaceState& a, const WorkspaceState& b);

 private:
  WorkspaceState() = default;

  std::vector<Layer> layers_;
  ScaleMode scale_ = ScaleMode::Linear;
  std::uint64_t y_limit_ = 1;
  IntensityRange range_;

  friend WorkspaceState create_workspace(std::shared_ptr<const ImageRecord> image);
  friend WorkspaceState add_overlay(const WorkspaceState& ws, std::shared_ptr<const ImageRecord> image);
  friend WorkspaceState set_range(const WorkspaceState& ws, std::int64_t lo, std::int64_t hi);
  friend WorkspaceState apply_click(const WorkspaceState& ws, double x);
  friend WorkspaceState set_scale(const WorkspaceState& ws, ScaleMode mode);
  friend WorkspaceState set_y_limit(const WorkspaceState& ws, std::int64_t limit);
};

/// Linear scale, y-limit at the tallest bin, range spanning the smallest to
/// largest intensity present, base image on palette color 0.
WorkspaceState create_workspace(std::shared_ptr<const ImageRecord> image);
WorkspaceState create_workspace(ImageRecord image);

/// Appends an overlay on the next palette color. Range and scale are left
/// alone. Throws OverlayLimitExceeded past 22 overlays and DepthMismatch when
/// the bit depth differs from the base image.
WorkspaceState add_overlay(const WorkspaceState& ws, std::shared_ptr<const ImageRecord> image);
WorkspaceState add_overlay(const WorkspaceState& ws, ImageRecord image);

/// Drops all overlays and restores every setting to its create_workspace default.
WorkspaceState clear_overlays(const WorkspaceState& ws);

/// Orders the bounds and clamps them to the domain.
WorkspaceState set_range(const WorkspaceState& ws, std::int64_t lo, std::int64_t hi);

/// Text-field entry. Throws ErrorCode::NonInteger unless both fields are
/// plain integers; ws is never modified.
WorkspaceState set_range(const WorkspaceState& ws, std::string_view lo, std::string_view hi);

/// Moves the bound nearer to round(x) onto it (ties move the lower bound).
/// Coordinates off the axis clamp to the domain edges; NaN is ignored.
WorkspaceState apply_click(const WorkspaceState& ws, double x);

WorkspaceState set_scale(const WorkspaceState& ws, ScaleMode mode);

/// Throws ErrorCode::InvalidLimit for limit < 1.
WorkspaceState set_y_limit(const WorkspaceState& ws, std::int64_t limit);

/// range_stats of every layer over the shared active range, in layer order.
/// Scale and y-limit are never consulted.
std::vector<RangeStatistics> workspace_statistics(const WorkspaceState& ws);

}  // namespace histoscope
