#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace histoscope {

enum class ErrorCode {
  // ingest
  UnsupportedFormat,
  SixteenBitColor,
  CorruptFile,
  UnsupportedDepth,
  RaggedRows,
  NonIntegerValue,
  OutOfDomain,
  EmptyTable,
  InvalidImage,
  // statistics
  RangeOutOfDomain,
  EmptyRange,
  // workspace
  OverlayLimitExceeded,
  DepthMismatch,
  NonInteger,
  InvalidLimit,
  // rendering
  CanvasTooSmall,
};

/// Stable identifier used in JSON error bodies and diagnostics, e.g. "SixteenBitColor".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace histoscope
