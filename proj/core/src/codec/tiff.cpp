#include <map>
#include <vector>

#include "codecs.hpp"

namespace histoscope::codec {
namespace {

enum Tag : std::uint16_t {
  kImageWidth = 256,
  kImageLength = 257,
  kBitsPerSample = 258,
  kCompression = 259,
  kPhotometric = 262,
  kStripOffsets = 273,
  kSamplesPerPixel = 277,
  kRowsPerStrip = 278,
  kStripByteCounts = 279,
  kPlanarConfiguration = 284,
  kColorMap = 320,
  kTileWidth = 322,
  kTileLength = 323,
  kTileOffsets = 324,
  kExtraSamples = 338,
  kSampleFormat = 339,
};

enum Photometric : std::uint32_t {
  kWhiteIsZero = 0,
  kBlackIsZero = 1,
  kRgb = 2,
  kPalette = 3,
};

constexpr std::uint32_t kNoCompression = 1;
constexpr std::uint32_t kPackBits = 32773;

struct Entry {
  std::uint16_t type = 0;
  std::uint32_t count = 0;
  std::size_t value_offset = 0;  // absolute offset of the value bytes
};

std::size_t type_size(std::uint16_t type) {
  switch (type) {
    case 1: case 2: case 6: case 7: return 1;   // BYTE ASCII SBYTE UNDEFINED
    case 3: case 8: return 2;                   // SHORT SSHORT
    case 4: case 9: case 11: return 4;          // LONG SLONG FLOAT
    case 5: case 10: case 12: return 8;         // RATIONAL SRATIONAL DOUBLE
    default: return 0;
  }
}

class Directory {
 public:
  Directory(ByteReader& in, const std::string& name) : in_(in), name_(name) {
    const std::uint16_t count = in_.u16();
    for (std::uint16_t i = 0; i < count; ++i) {
      const std::uint16_t tag = in_.u16();
      Entry entry;
      entry.type = in_.u16();
      entry.count = in_.u32();
      const std::size_t inline_at = in_.position();
      const std::uint32_t offset = in_.u32();
      const std::size_t size = type_size(entry.type);
      entry.value_offset = (size != 0 && size * entry.count <= 4) ? inline_at : offset;
      entries_[tag] = entry;
    }
  }

  bool has(std::uint16_t tag) const { return entries_.contains(tag); }

  /// Integer values of a BYTE/SHORT/LONG tag.
  std::vector<std::uint32_t> values(std::uint16_t tag) const {
    const auto it = entries_.find(tag);
    if (it == entries_.end()) return {};
    const Entry& e = it->second;
    const std::size_t size = type_size(e.type);
    if (e.type != 1 && e.type != 3 && e.type != 4) corrupt(name_, "unexpected TIFF field type");
    ByteReader reader = in_;
    reader.seek(e.value_offset);
    if (std::size_t{e.count} * size > reader.remaining()) corrupt(name_, "TIFF field runs past end of file");
    std::vector<std::uint32_t> out(e.count);
    for (auto& v : out) v = size == 1 ? reader.u8() : size == 2 ? reader.u16() : reader.u32();
    return out;
  }

  std::uint32_t value(std::uint16_t tag, std::uint32_t fallback) const {
    const auto v = values(tag);
    return v.empty() ? fallback : v.front();
  }

 private:
  ByteReader& in_;
  const std::string& name_;
  std::map<std::uint16_t, Entry> entries_;
};

void unpack_bits(std::span<const std::byte> src, std::vector<std::uint8_t>& out, std::size_t limit) {
  std::size_t i = 0;
  while (i < src.size() && out.size() < limit) {
    const auto n = static_cast<std::int8_t>(src[i++]);
    if (n >= 0) {
      const std::size_t run = std::min<std::size_t>(static_cast<std::size_t>(n) + 1, src.size() - i);
      for (std::size_t k = 0; k < run; ++k) out.push_back(static_cast<std::uint8_t>(src[i + k]));
      i += run;
    } else if (n != -128) {
      if (i >= src.size()) break;
      const auto value = static_cast<std::uint8_t>(src[i++]);
      out.insert(out.end(), static_cast<std::size_t>(1 - n), value);
    }
  }
}

}  // namespace

ImageRecord decode_tiff(std::span<const std::byte> bytes, std::string name) {
  ByteReader in(bytes, name);
  const std::uint8_t b0 = in.u8();
  const std::uint8_t b1 = in.u8();
  if (b0 == 'M' && b1 == 'M') {
    in.set_big_endian(true);
  } else if (b0 != 'I' || b1 != 'I') {
    throw Error(ErrorCode::UnsupportedFormat, name + ": not a TIFF file");
  }
  const std::uint16_t magic = in.u16();
  if (magic == 43) throw Error(ErrorCode::UnsupportedFormat, name + ": BigTIFF is not baseline TIFF");
  if (magic != 42) throw Error(ErrorCode::UnsupportedFormat, name + ": not a TIFF file");
  in.seek(in.u32());

  const Directory ifd(in, name);
  if (ifd.has(kTileWidth) || ifd.has(kTileLength) || ifd.has(kTileOffsets)) {
    throw Error(ErrorCode::UnsupportedFormat, name + ": tiled TIFF is not baseline TIFF");
  }

  const std::uint32_t width = ifd.value(kImageWidth, 0);
  const std::uint32_t height = ifd.value(kImageLength, 0);
  if (width == 0 || height == 0) corrupt(name, "TIFF is missing image dimensions");
  check_dimensions(name, width, height);
  const std::uint32_t samples = ifd.value(kSamplesPerPixel, 1);
  if (samples == 0 || samples > 8) corrupt(name, "invalid TIFF SamplesPerPixel");

  for (const std::uint32_t format : ifd.values(kSampleFormat)) {
    if (format != 1) {
      throw Error(ErrorCode::UnsupportedDepth,
                  name + ": only unsigned integer samples are supported (no float or signed TIFF)");
    }
  }
  auto bit_list = ifd.values(kBitsPerSample);
  if (bit_list.empty()) bit_list.assign(samples, 1);
  const std::uint32_t sample_bits = bit_list.front();
  for (const std::uint32_t b : bit_list) {
    if (b != sample_bits || (b != 8 && b != 16)) {
      throw Error(ErrorCode::UnsupportedDepth,
                  name + ": unsupported TIFF bit depth " + std::to_string(b) + " (need 8 or 16)");
    }
  }

  const std::uint32_t extra = static_cast<std::uint32_t>(ifd.values(kExtraSamples).size());
  const std::uint32_t photometric =
      ifd.value(kPhotometric, samples - std::min(extra, samples) >= 3 ? kRgb : kBlackIsZero);
  if (sample_bits == 16 && (samples > 1 || photometric == kRgb || photometric == kPalette)) {
    sixteen_bit_color(name);
  }

  const std::uint32_t compression = ifd.value(kCompression, kNoCompression);
  if (compression != kNoCompression && compression != kPackBits) {
    throw Error(ErrorCode::UnsupportedFormat,
                name + ": TIFF compression " + std::to_string(compression) +
                    " is not baseline (only uncompressed and PackBits are supported)");
  }
  if (samples > 1 && ifd.value(kPlanarConfiguration, 1) != 1) {
    throw Error(ErrorCode::UnsupportedFormat, name + ": planar (separate-plane) TIFF is not supported");
  }
  if (photometric != kWhiteIsZero && photometric != kBlackIsZero && photometric != kRgb &&
      photometric != kPalette) {
    throw Error(ErrorCode::UnsupportedFormat,
                name + ": TIFF photometric interpretation " + std::to_string(photometric) + " is not supported");
  }
  if (photometric == kRgb && samples < 3) corrupt(name, "RGB TIFF with fewer than 3 samples");

  const std::size_t bytes_per_sample = sample_bits / 8;
  const std::size_t expected = std::size_t{width} * height * samples * bytes_per_sample;
  const auto offsets = ifd.values(kStripOffsets);
  auto counts = ifd.values(kStripByteCounts);
  if (offsets.empty()) corrupt(name, "TIFF has no strip offsets");
  if (counts.empty() && compression == kNoCompression && offsets.size() == 1) {
    counts.push_back(static_cast<std::uint32_t>(expected));
  }
  if (counts.size() != offsets.size()) corrupt(name, "TIFF strip tables disagree");

  std::vector<std::uint8_t> raw;
  // PackBits expands at most 64-fold, so the file size bounds real output.
  raw.reserve(std::min(expected, bytes.size() * 64));
  for (std::size_t s = 0; s < offsets.size() && raw.size() < expected; ++s) {
    const auto strip = in.slice(offsets[s], counts[s]);
    if (compression == kPackBits) {
      unpack_bits(strip, raw, expected);
    } else {
      for (const std::byte b : strip) raw.push_back(static_cast<std::uint8_t>(b));
    }
  }
  if (raw.size() < expected) corrupt(name, "TIFF strip data is truncated");

  const bool big_endian = b0 == 'M';
  const auto sample_at = [&](std::size_t index) -> std::uint32_t {
    if (bytes_per_sample == 1) return raw[index];
    const std::uint32_t hi = raw[2 * index + (big_endian ? 0 : 1)];
    const std::uint32_t lo = raw[2 * index + (big_endian ? 1 : 0)];
    return (hi << 8) | lo;
  };

  const std::size_t count = std::size_t{width} * height;
  std::vector<std::uint16_t> pixels(count);
  const std::uint32_t max_value = sample_bits == 16 ? 65535 : 255;

  if (photometric == kPalette) {
    const auto map = ifd.values(kColorMap);
    const std::size_t entries = std::size_t{1} << sample_bits;
    if (map.size() < 3 * entries) corrupt(name, "TIFF palette is incomplete");
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t index = sample_at(i * samples);
      pixels[i] = rgb_to_gray(static_cast<std::uint8_t>(map[index] >> 8),
                              static_cast<std::uint8_t>(map[entries + index] >> 8),
                              static_cast<std::uint8_t>(map[2 * entries + index] >> 8));
    }
  } else if (photometric == kRgb) {
    for (std::size_t i = 0; i < count; ++i) {
      pixels[i] = rgb_to_gray(static_cast<std::uint8_t>(sample_at(i * samples)),
                              static_cast<std::uint8_t>(sample_at(i * samples + 1)),
                              static_cast<std::uint8_t>(sample_at(i * samples + 2)));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t v = sample_at(i * samples);
      pixels[i] = static_cast<std::uint16_t>(photometric == kWhiteIsZero ? max_value - v : v);
    }
  }
  const BitDepth depth = sample_bits == 16 ? BitDepth::k16 : BitDepth::k8;
  return ImageRecord(std::move(name), width, height, depth, std::move(pixels));
}

}  // namespace histoscope::codec
