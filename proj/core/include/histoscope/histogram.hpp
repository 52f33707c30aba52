#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "histoscope/image.hpp"

namespace histoscope {

/// Unit-width bin counts over the full intensity domain of one image:
/// 256 bins at 8 bits, 65536 at 16 bits.
class Histogram {
 public:
  /// Takes ownership of precomputed counts; length must equal bin_count(depth).
  Histogram(BitDepth depth, std::vector<std::uint64_t> counts);

  BitDepth bit_depth() const noexcept { return depth_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t count(std::uint32_t value) const noexcept { return counts_[value]; }
  std::uint64_t total_pixels() const noexcept { return total_; }

  std::uint64_t max_count() const noexcept;
  /// Smallest and largest intensity with a non-zero count. Empty only for a
  /// histogram of zero pixels.
  std::optional<std::uint32_t> min_present() const noexcept;
  std::optional<std::uint32_t> max_present() const noexcept;

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  BitDepth depth_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Single pass over the pixels.
Histogram build_histogram(const ImageRecord& image);

/// Inclusive [lo, hi] selection of histogram bins.
struct IntensityRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  friend bool operator==(const IntensityRange&, const IntensityRange&) = default;
};

inline IntensityRange full_range(BitDepth depth) noexcept { return {0, max_intensity(depth)}; }

/// Throws ErrorCode::RangeOutOfDomain unless lo <= hi <= 2^depth - 1.
void validate_range(const Histogram& hist, IntensityRange range);

struct RangeStatistics {
  std::uint64_t pixel_count = 0;
  double percent_of_total = 0.0;
  double entropy_bits = 0.0;
  /// Undefined (empty) when the range holds no pixels.
  std::optional<double> mean;
  double rms_contrast = 0.0;
  std::uint64_t total_intensity = 0;

  friend bool operator==(const RangeStatistics&, const RangeStatistics&) = default;
};

std::uint64_t range_pixel_count(const Histogram& hist, IntensityRange range);

/// Exact integer sum of v * counts[v] over the range.
std::uint64_t range_total_intensity(const Histogram& hist, IntensityRange range);

/// First-order ("monkey model") Shannon entropy in bits of the bin
/// probabilities counts[v] / N restricted to the range. Zero for N = 0.
double range_entropy(const Histogram& hist, IntensityRange range);

/// Throws ErrorCode::EmptyRange when the range holds no pixels.
double range_mean(const Histogram& hist, IntensityRange range);

/// Population standard deviation of in-range intensities divided by
/// 2^depth - 1. Zero for N = 0.
double range_rms_contrast(const Histogram& hist, IntensityRange range);

/// The six range quantities in one pass over the bins. An empty range yields
/// zeros with mean left undefined.
RangeStatistics range_stats(const Histogram& hist, IntensityRange range);

}  // namespace histoscope
