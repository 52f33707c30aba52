#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "histoscope/image.hpp"

namespace histoscope {

enum class FileFormat { Png, Jpeg, Gif, Bmp, Tiff, Unknown };

/// Sniff the container format from magic bytes.
FileFormat detect_format(std::span<const std::byte> bytes) noexcept;

/// Images with a side longer than this decode fine but are slow to explore
/// interactively; callers may surface a warning.
inline constexpr std::uint32_t kRecommendedMaxSide = 1024;

bool exceeds_recommended_size(const ImageRecord& image) noexcept;

/// Decode PNG, JPEG, GIF, BMP or baseline TIFF into a grayscale record.
///
/// 8-bit color is converted with rgb_to_gray, palettes are expanded first and
/// alpha is dropped. 16-bit input is accepted only when it is a single gray
/// channel (no alpha); anything else raises ErrorCode::SixteenBitColor. GIF yields
/// its first frame.
ImageRecord decode_image(std::span<const std::byte> bytes, std::string name);

/// Parse a one- or two-dimensional numeric CSV table. A single column is read
/// as a 1D series, like a single row, so both produce height 1.
ImageRecord ingest_csv(std::string_view text, std::string name, BitDepth declared_depth);

/// Read a file and dispatch on extension: `.csv` goes through ingest_csv with
/// csv_depth, everything else through decode_image. The record is named after
/// the file name (no directories).
ImageRecord load_image_file(const std::filesystem::path& path, BitDepth csv_depth = BitDepth::k8);

}  // namespace histoscope
