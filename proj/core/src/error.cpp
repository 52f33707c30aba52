#include "histoscope/error.hpp"

namespace histoscope {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::SixteenBitColor: return "SixteenBitColor";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::UnsupportedDepth: return "UnsupportedDepth";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonIntegerValue: return "NonIntegerValue";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::RangeOutOfDomain: return "RangeOutOfDomain";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::OverlayLimitExceeded: return "OverlayLimitExceeded";
    case ErrorCode::DepthMismatch: return "DepthMismatch";
    case ErrorCode::NonInteger: return "NonInteger";
    case ErrorCode::InvalidLimit: return "InvalidLimit";
    case ErrorCode::CanvasTooSmall: return "CanvasTooSmall";
  }
  return "Unknown";
}

}  // namespace histoscope
