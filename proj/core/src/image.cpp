#include "histoscope/image.hpp"

#include <algorithm>
#include <string>

#include "histoscope/error.hpp"

namespace histoscope {

ImageRecord::ImageRecord(std::string source_name, std::uint32_t width, std::uint32_t height,
                         BitDepth depth, std::vector<std::uint16_t> pixels)
    : source_name_(std::move(source_name)),
      width_(width),
      height_(height),
      depth_(depth),
      pixels_(std::move(pixels)) {
  if (depth_ != BitDepth::k8 && depth_ != BitDepth::k16) {
    throw Error(ErrorCode::UnsupportedDepth, "bit depth must be 8 or 16");
  }
  if (width_ == 0 || height_ == 0) {
    throw Error(ErrorCode::InvalidImage, source_name_ + ": image has zero width or height");
  }
  if (pixels_.size() != std::size_t{width_} * height_) {
    throw Error(ErrorCode::InvalidImage, source_name_ + ": pixel buffer does not match " +
                                             std::to_string(width_) + "x" + std::to_string(height_));
  }
  if (depth_ == BitDepth::k8) {
    const auto peak = std::max_element(pixels_.begin(), pixels_.end());
    if (*peak > 255) {
      throw Error(ErrorCode::InvalidImage,
                  source_name_ + ": pixel value " + std::to_string(*peak) + " exceeds 8-bit range");
    }
  }
}

}  // namespace histoscope
