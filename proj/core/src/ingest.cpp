#include "histoscope/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "codec/codecs.hpp"
#include "histoscope/error.hpp"

namespace histoscope {
namespace codec {

std::vector<std::uint16_t> interleaved8_to_gray(std::span<const std::uint8_t> samples,
                                                std::size_t pixel_count, int channels) {
  std::vector<std::uint16_t> gray(pixel_count);
  const auto stride = static_cast<std::size_t>(channels);
  if (channels <= 2) {
    for (std::size_t i = 0; i < pixel_count; ++i) gray[i] = samples[i * stride];
  } else {
    for (std::size_t i = 0; i < pixel_count; ++i) {
      const std::uint8_t* p = samples.data() + i * stride;
      gray[i] = rgb_to_gray(p[0], p[1], p[2]);
    }
  }
  return gray;
}

}  // namespace codec

FileFormat detect_format(std::span<const std::byte> bytes) noexcept {
  const auto starts_with = [&](std::initializer_list<int> magic) {
    if (bytes.size() < magic.size()) return false;
    return std::equal(magic.begin(), magic.end(), bytes.begin(),
                      [](int m, std::byte b) { return static_cast<int>(b) == m; });
  };
  if (starts_with({0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A})) return FileFormat::Png;
  if (starts_with({0xFF, 0xD8, 0xFF})) return FileFormat::Jpeg;
  if (starts_with({'G', 'I', 'F', '8'})) return FileFormat::Gif;
  if (starts_with({'B', 'M'})) return FileFormat::Bmp;
  if (starts_with({'I', 'I', 0x2A, 0x00}) || starts_with({'M', 'M', 0x00, 0x2A}) ||
      starts_with({'I', 'I', 0x2B, 0x00}) || starts_with({'M', 'M', 0x00, 0x2B})) {
    return FileFormat::Tiff;
  }
  return FileFormat::Unknown;
}

bool exceeds_recommended_size(const ImageRecord& image) noexcept {
  return image.width() > kRecommendedMaxSide || image.height() > kRecommendedMaxSide;
}

ImageRecord decode_image(std::span<const std::byte> bytes, std::string name) {
  switch (detect_format(bytes)) {
    case FileFormat::Png: return codec::decode_png(bytes, std::move(name));
    case FileFormat::Jpeg: return codec::decode_jpeg(bytes, std::move(name));
    case FileFormat::Gif: return codec::decode_gif(bytes, std::move(name));
    case FileFormat::Bmp: return codec::decode_bmp(bytes, std::move(name));
    case FileFormat::Tiff: return codec::decode_tiff(bytes, std::move(name));
    case FileFormat::Unknown: break;
  }
  throw Error(ErrorCode::UnsupportedFormat,
              name + ": unrecognized image format (expected PNG, JPEG, GIF, BMP or TIFF)");
}

namespace {

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open file");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::transform(raw.begin(), raw.end(), bytes.begin(), [](char c) { return static_cast<std::byte>(c); });
  return bytes;
}

bool has_csv_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv";
}

}  // namespace

ImageRecord load_image_file(const std::filesystem::path& path, BitDepth csv_depth) {
  const auto bytes = read_file(path);
  std::string name = path.filename().string();
  if (has_csv_extension(path)) {
    const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    return ingest_csv(text, std::move(name), csv_depth);
  }
  return decode_image(bytes, std::move(name));
}

}  // namespace histoscope
