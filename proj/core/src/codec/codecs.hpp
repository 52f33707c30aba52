#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "histoscope/error.hpp"
#include "histoscope/image.hpp"

namespace histoscope::codec {

ImageRecord decode_png(std::span<const std::byte> bytes, std::string name);
ImageRecord decode_jpeg(std::span<const std::byte> bytes, std::string name);
ImageRecord decode_gif(std::span<const std::byte> bytes, std::string name);
ImageRecord decode_bmp(std::span<const std::byte> bytes, std::string name);
ImageRecord decode_tiff(std::span<const std::byte> bytes, std::string name);

[[noreturn]] inline void corrupt(const std::string& name, const std::string& what) {
  throw Error(ErrorCode::CorruptFile, name + ": " + what);
}

[[noreturn]] inline void sixteen_bit_color(const std::string& name) {
  throw Error(ErrorCode::SixteenBitColor,
              name + ": 16-bit color or multi-channel images are not supported; convert the "
                     "image to single-channel grayscale with an external editor (for example GIMP: Image > Mode > "
                     "Grayscale) before opening it");
}

/// Largest decoded image accepted, in pixels (16384 x 16384). Bounds memory
/// use when a damaged header claims absurd dimensions.
inline constexpr std::uint64_t kMaxDecodedPixels = std::uint64_t{1} << 28;

inline void check_dimensions(const std::string& name, std::uint64_t width, std::uint64_t height) {
  if (width == 0 || height == 0) corrupt(name, "image has zero width or height");
  if (width > kMaxDecodedPixels || height > kMaxDecodedPixels / width) {
    corrupt(name, "image dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                      " exceed the decoder limit of " + std::to_string(kMaxDecodedPixels) + " pixels");
  }
}

/// Converts interleaved 8-bit samples to gray. `channels` is 1-4; a second
/// channel with one color channel, or a fourth with three, is alpha and dropped.
std::vector<std::uint16_t> interleaved8_to_gray(std::span<const std::uint8_t> samples,
                                                std::size_t pixel_count, int channels);

/// Bounds-checked reader over a byte span. Reads past the end raise CorruptFile.
class ByteReader {
 public:
  ByteReader(std::span<const std::byte> bytes, const std::string& name, bool big_endian = false)
      : bytes_(bytes), name_(name), big_endian_(big_endian) {}

  void set_big_endian(bool big) noexcept { big_endian_ = big; }
  std::size_t size() const noexcept { return bytes_.size(); }
  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void seek(std::size_t pos) {
    if (pos > bytes_.size()) corrupt(name_, "offset past end of file");
    pos_ = pos;
  }
  void skip(std::size_t n) { seek(checked_end(n)); }

  std::uint8_t u8() { return static_cast<std::uint8_t>(bytes_[checked_end(1) - 1]); }

  std::uint16_t u16() {
    const std::size_t end = checked_end(2);
    const auto a = static_cast<std::uint16_t>(bytes_[end - 2]);
    const auto b = static_cast<std::uint16_t>(bytes_[end - 1]);
    return big_endian_ ? static_cast<std::uint16_t>((a << 8) | b)
                       : static_cast<std::uint16_t>((b << 8) | a);
  }

  std::uint32_t u32() {
    const std::uint32_t first = u16();
    const std::uint32_t second = u16();
    return big_endian_ ? (first << 16) | second : (second << 16) | first;
  }

  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

  std::span<const std::byte> take(std::size_t n) {
    const std::size_t end = checked_end(n);
    return bytes_.subspan(end - n, n);
  }

  /// Span at an absolute offset, without moving the cursor.
  std::span<const std::byte> slice(std::size_t offset, std::size_t n) const {
    if (offset > bytes_.size() || n > bytes_.size() - offset) {
      corrupt(name_, "data extends past end of file");
    }
    return bytes_.subspan(offset, n);
  }

 private:
  std::size_t checked_end(std::size_t n) {
    if (n > bytes_.size() - pos_) corrupt(name_, "unexpected end of file");
    pos_ += n;
    return pos_;
  }

  std::span<const std::byte> bytes_;
  const std::string& name_;
  bool big_endian_;
  std::size_t pos_ = 0;
};

}  // namespace histoscope::codec
