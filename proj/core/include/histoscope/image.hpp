#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace histoscope {

enum class BitDepth : std::uint8_t { k8 = 8, k16 = 16 };

constexpr unsigned bits(BitDepth depth) noexcept { return static_cast<unsigned>(depth); }

/// Largest representable intensity, 2^depth - 1. Also the RMS-contrast normalizer.
constexpr std::uint32_t max_intensity(BitDepth depth) noexcept {
  return (std::uint32_t{1} << bits(depth)) - 1;
}

/// Number of unit-width histogram bins for a depth.
constexpr std::size_t bin_count(BitDepth depth) noexcept {
  return std::size_t{1} << bits(depth);
}

/// Decoded grayscale raster. Immutable once constructed; the constructor
/// enforces size and domain invariants.
class ImageRecord {
 public:
  ImageRecord(std::string source_name, std::uint32_t width, std::uint32_t height,
              BitDepth depth, std::vector<std::uint16_t> pixels);

  const std::string& source_name() const noexcept { return source_name_; }
  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  BitDepth bit_depth() const noexcept { return depth_; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }

  /// Row-major intensities.
  std::span<const std::uint16_t> pixels() const noexcept { return pixels_; }
  std::uint16_t at(std::uint32_t x, std::uint32_t y) const noexcept {
    return pixels_[std::size_t{y} * width_ + x];
  }

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;

 private:
  std::string source_name_;
  std::uint32_t width_;
  std::uint32_t height_;
  BitDepth depth_;
  std::vector<std::uint16_t> pixels_;
};

/// Luma conversion for 8-bit color: round-half-up(0.299 R + 0.587 G + 0.114 B).
/// Evaluated in exact integer thousandths, so (255,0,0) -> 76 and (0,255,0) -> 150.
constexpr std::uint8_t rgb_to_gray(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const std::uint32_t scaled = 299u * r + 587u * g + 114u * b;
  const std::uint32_t rounded = (scaled + 500u) / 1000u;
  return static_cast<std::uint8_t>(rounded > 255u ? 255u : rounded);
}

}  // namespace histoscope
