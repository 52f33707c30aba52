#include "histoscope/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "histoscope/error.hpp"

namespace histoscope {

Histogram::Histogram(BitDepth depth, std::vector<std::uint64_t> counts)
    : depth_(depth), counts_(std::move(counts)) {
  if (counts_.size() != bin_count(depth_)) {
    throw std::invalid_argument("histogram needs exactly " + std::to_string(bin_count(depth_)) + " bins");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t Histogram::max_count() const noexcept {
  return *std::max_element(counts_.begin(), counts_.end());
}

std::optional<std::uint32_t> Histogram::min_present() const noexcept {
  const auto it = std::find_if(counts_.begin(), counts_.end(), [](std::uint64_t c) { return c != 0; });
  if (it == counts_.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - counts_.begin());
}

std::optional<std::uint32_t> Histogram::max_present() const noexcept {
  const auto it = std::find_if(counts_.rbegin(), counts_.rend(), [](std::uint64_t c) { return c != 0; });
  if (it == counts_.rend()) return std::nullopt;
  return static_cast<std::uint32_t>(counts_.rend() - it - 1);
}

Histogram build_histogram(const ImageRecord& image) {
  std::vector<std::uint64_t> counts(bin_count(image.bit_depth()), 0);
  for (const std::uint16_t v : image.pixels()) ++counts[v];
  return Histogram(image.bit_depth(), std::move(counts));
}

void validate_range(const Histogram& hist, IntensityRange range) {
  const std::uint32_t top = max_intensity(hist.bit_depth());
  if (range.lo > range.hi || range.hi > top) {
    throw Error(ErrorCode::RangeOutOfDomain,
                "intensity range [" + std::to_string(range.lo) + ", " + std::to_string(range.hi) +
                    "] is not within [0, " + std::to_string(top) + "] with lo <= hi");
  }
}

namespace {

std::span<const std::uint64_t> bins_in(const Histogram& hist, IntensityRange range) {
  validate_range(hist, range);
  return hist.counts().subspan(range.lo, std::size_t{range.hi} - range.lo + 1);
}

struct Moments {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
};

Moments moments(std::span<const std::uint64_t> bins, std::uint32_t first_value) {
  Moments m;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    m.count += bins[i];
    m.sum += (first_value + i) * bins[i];
  }
  return m;
}

double entropy_of(std::span<const std::uint64_t> bins, std::uint64_t n) {
  if (n == 0) return 0.0;
  const double total = static_cast<double>(n);
  double h = 0.0;
  for (const std::uint64_t c : bins) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / total;
    h -= q * std::log2(q);
  }
  // A single occupied bin gives -1 * log2(1) = -0.0.
  return h == 0.0 ? 0.0 : h;
}

double rms_of(std::span<const std::uint64_t> bins, std::uint32_t first_value, std::uint64_t n, double mean,
              BitDepth depth) {
  if (n == 0) return 0.0;
  double squares = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i] == 0) continue;
    const double delta = static_cast<double>(first_value + i) - mean;
    squares += static_cast<double>(bins[i]) * delta * delta;
  }
  return std::sqrt(squares / static_cast<double>(n)) / static_cast<double>(max_intensity(depth));
}

}  // namespace

std::uint64_t range_pixel_count(const Histogram& hist, IntensityRange range) {
  const auto bins = bins_in(hist, range);
  return std::accumulate(bins.begin(), bins.end(), std::uint64_t{0});
}

std::uint64_t range_total_intensity(const Histogram& hist, IntensityRange range) {
  return moments(bins_in(hist, range), range.lo).sum;
}

double range_entropy(const Histogram& hist, IntensityRange range) {
  const auto bins = bins_in(hist, range);
  return entropy_of(bins, moments(bins, range.lo).count);
}

double range_mean(const Histogram& hist, IntensityRange range) {
  const Moments m = moments(bins_in(hist, range), range.lo);
  if (m.count == 0) {
    throw Error(ErrorCode::EmptyRange, "mean is undefined: no pixels in [" + std::to_string(range.lo) + ", " +
                                           std::to_string(range.hi) + "]");
  }
  return static_cast<double>(m.sum) / static_cast<double>(m.count);
}

double range_rms_contrast(const Histogram& hist, IntensityRange range) {
  const auto bins = bins_in(hist, range);
  const Moments m = moments(bins, range.lo);
  if (m.count == 0) return 0.0;
  const double mean = static_cast<double>(m.sum) / static_cast<double>(m.count);
  return rms_of(bins, range.lo, m.count, mean, hist.bit_depth());
}

RangeStatistics range_stats(const Histogram& hist, IntensityRange range) {
  const auto bins = bins_in(hist, range);
  const Moments m = moments(bins, range.lo);

  RangeStatistics stats;
  stats.pixel_count = m.count;
  stats.total_intensity = m.sum;
  if (m.count == 0) return stats;

  stats.percent_of_total = 100.0 * static_cast<double>(m.count) / static_cast<double>(hist.total_pixels());
  stats.entropy_bits = entropy_of(bins, m.count);
  const double mean = static_cast<double>(m.sum) / static_cast<double>(m.count);
  stats.mean = mean;
  stats.rms_contrast = rms_of(bins, range.lo, m.count, mean, hist.bit_depth());
  return stats;
}

}  // namespace histoscope
