#include "fixtures.hpp"

#include <png.h>
#include <cstdio>
#include <jpeglib.h>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace histoscope::testing {
namespace {

class ByteWriter {
 public:
  explicit ByteWriter(bool big_endian = false) : big_endian_(big_endian) {}

  void u8(std::uint32_t v) { out_.push_back(static_cast<std::byte>(v & 0xff)); }
  void u16(std::uint32_t v) {
    if (big_endian_) {
      u8(v >> 8);
      u8(v);
    } else {
      u8(v);
      u8(v >> 8);
    }
  }
  void u32(std::uint32_t v) {
    if (big_endian_) {
      u16(v >> 16);
      u16(v & 0xffff);
    } else {
      u16(v & 0xffff);
      u16(v >> 16);
    }
  }
  void bytes(std::span<const std::uint8_t> data) {
    for (const auto b : data) u8(b);
  }
  void pad_to(std::size_t size) {
    while (out_.size() < size) u8(0);
  }
  void patch_u32(std::size_t at, std::uint32_t v) {
    ByteWriter tmp(big_endian_);
    tmp.u32(v);
    std::copy(tmp.out_.begin(), tmp.out_.end(), out_.begin() + static_cast<std::ptrdiff_t>(at));
  }
  std::size_t size() const { return out_.size(); }
  std::vector<std::byte> take() { return std::move(out_); }

 private:
  bool big_endian_;
  std::vector<std::byte> out_;
};

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> in) {
  std::vector<std::uint8_t> out;
  std::size_t i = 0;
  while (i < in.size()) {
    std::size_t run = 1;
    while (i + run < in.size() && run < 128 && in[i + run] == in[i]) ++run;
    if (run >= 3) {
      out.push_back(static_cast<std::uint8_t>(static_cast<std::int8_t>(1 - static_cast<int>(run))));
      out.push_back(in[i]);
      i += run;
      continue;
    }
    std::size_t literal = 0;
    while (i + literal < in.size() && literal < 128) {
      if (i + literal + 2 < in.size() && in[i + literal] == in[i + literal + 1] &&
          in[i + literal] == in[i + literal + 2]) {
        break;
      }
      ++literal;
    }
    out.push_back(static_cast<std::uint8_t>(literal - 1));
    out.insert(out.end(), in.begin() + static_cast<std::ptrdiff_t>(i),
               in.begin() + static_cast<std::ptrdiff_t>(i + literal));
    i += literal;
  }
  return out;
}

struct TiffEntry {
  std::uint16_t tag;
  std::uint16_t type;  // 3 SHORT, 4 LONG
  std::vector<std::uint32_t> values;
};

}  // namespace

std::span<const std::byte> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::byte*>(s.data()), s.size()};
}

std::vector<std::byte> make_tiff(const TiffSpec& spec) {
  ByteWriter w(spec.big_endian);
  const std::size_t bytes_per_sample = spec.bits / 8;
  const std::uint32_t rows_per_strip = spec.rows_per_strip == 0 ? spec.height : spec.rows_per_strip;
  const std::size_t row_samples = std::size_t{spec.width} * spec.samples;

  // header
  if (spec.big_endian) {
    w.u8('M');
    w.u8('M');
  } else {
    w.u8('I');
    w.u8('I');
  }
  w.u16(42);
  w.u32(0);  // IFD offset, patched below

  std::vector<std::uint32_t> strip_offsets;
  std::vector<std::uint32_t> strip_counts;
  for (std::uint32_t row = 0; row < spec.height; row += rows_per_strip) {
    const std::uint32_t rows = std::min(rows_per_strip, spec.height - row);
    ByteWriter strip(spec.big_endian);
    for (std::size_t i = 0; i < rows * row_samples; ++i) {
      const std::uint32_t v = spec.data[row * row_samples + i];
      if (bytes_per_sample == 1) strip.u8(v);
      else if (bytes_per_sample == 2) strip.u16(v);
      else strip.u32(v);
    }
    auto raw = strip.take();
    std::vector<std::uint8_t> payload(raw.size());
    std::transform(raw.begin(), raw.end(), payload.begin(), [](std::byte b) { return static_cast<std::uint8_t>(b); });
    if (spec.compression == 32773) payload = pack_bits(payload);
    strip_offsets.push_back(static_cast<std::uint32_t>(w.size()));
    strip_counts.push_back(static_cast<std::uint32_t>(payload.size()));
    w.bytes(payload);
  }
  w.pad_to((w.size() + 1) / 2 * 2);

  std::vector<TiffEntry> entries{
      {256, 4, {spec.width}},
      {257, 4, {spec.height}},
      {258, 3, std::vector<std::uint32_t>(spec.samples, spec.bits)},
      {259, 3, {spec.compression}},
      {262, 3, {spec.photometric}},
  };
  if (spec.tiled) {
    entries.push_back({322, 4, {16}});
    entries.push_back({323, 4, {16}});
    entries.push_back({324, 4, strip_offsets});
    entries.push_back({325, 4, strip_counts});
  } else {
    entries.push_back({273, 4, strip_offsets});
  }
  entries.push_back({277, 3, {spec.samples}});
  entries.push_back({278, 4, {rows_per_strip}});
  if (!spec.tiled) entries.push_back({279, 4, strip_counts});
  entries.push_back({284, 3, {spec.planar_separate ? 2u : 1u}});
  if (!spec.colormap.empty()) {
    entries.push_back({320, 3, std::vector<std::uint32_t>(spec.colormap.begin(), spec.colormap.end())});
  }
  if (spec.extra_samples > 0) entries.push_back({338, 3, std::vector<std::uint32_t>(spec.extra_samples, 2)});
  if (spec.sample_format != 1) {
    entries.push_back({339, 3, std::vector<std::uint32_t>(spec.samples, spec.sample_format)});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.tag < b.tag; });

  const std::size_t ifd_offset = w.size();
  w.patch_u32(4, static_cast<std::uint32_t>(ifd_offset));
  std::size_t overflow = ifd_offset + 2 + entries.size() * 12 + 4;
  std::vector<std::pair<std::size_t, const TiffEntry*>> deferred;
  w.u16(static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    w.u16(e.tag);
    w.u16(e.type);
    w.u32(static_cast<std::uint32_t>(e.values.size()));
    const std::size_t size = (e.type == 3 ? 2 : 4) * e.values.size();
    if (size <= 4) {
      if (e.type == 3) {
        w.u16(e.values[0]);
        w.u16(e.values.size() > 1 ? e.values[1] : 0);
      } else {
        w.u32(e.values[0]);
      }
    } else {
      w.u32(static_cast<std::uint32_t>(overflow));
      deferred.emplace_back(overflow, &e);
      overflow += (size + 1) / 2 * 2;
    }
  }
  w.u32(0);  // no next IFD
  for (const auto& [offset, e] : deferred) {
    w.pad_to(offset);
    for (const auto v : e->values) {
      if (e->type == 3) w.u16(v);
      else w.u32(v);
    }
  }
  return w.take();
}

std::vector<std::byte> make_bmp(const BmpSpec& spec) {
  const bool palettized = spec.bpp <= 8;
  const std::size_t palette_entries = palettized ? spec.palette.size() : 0;
  const std::size_t stride = ((std::size_t{spec.bpp} * spec.width + 31) / 32) * 4;

  std::vector<std::uint8_t> pixels;
  if (spec.rle8) {
    for (std::uint32_t r = 0; r < spec.height; ++r) {
      const std::uint32_t y = spec.height - 1 - r;
      std::uint32_t x = 0;
      while (x < spec.width) {
        const std::uint8_t v = spec.indices[std::size_t{y} * spec.width + x];
        std::uint32_t run = 1;
        while (x + run < spec.width && run < 255 && spec.indices[std::size_t{y} * spec.width + x + run] == v) ++run;
        pixels.push_back(static_cast<std::uint8_t>(run));
        pixels.push_back(v);
        x += run;
      }
      pixels.push_back(0);
      pixels.push_back(0);
    }
    pixels.push_back(0);
    pixels.push_back(1);
  } else {
    pixels.assign(stride * spec.height, 0);
    for (std::uint32_t r = 0; r < spec.height; ++r) {
      const std::uint32_t y = spec.top_down ? r : spec.height - 1 - r;
      std::uint8_t* row = pixels.data() + r * stride;
      for (std::uint32_t x = 0; x < spec.width; ++x) {
        const std::size_t i = std::size_t{y} * spec.width + x;
        switch (spec.bpp) {
          case 1: row[x / 8] |= static_cast<std::uint8_t>((spec.indices[i] & 1) << (7 - x % 8)); break;
          case 4: row[x / 2] |= static_cast<std::uint8_t>((spec.indices[i] & 0xf) << (x % 2 == 0 ? 4 : 0)); break;
          case 8: row[x] = spec.indices[i]; break;
          case 24:
            row[3 * x] = spec.rgb[i][2];
            row[3 * x + 1] = spec.rgb[i][1];
            row[3 * x + 2] = spec.rgb[i][0];
            break;
          case 32:
            row[4 * x] = spec.rgb[i][2];
            row[4 * x + 1] = spec.rgb[i][1];
            row[4 * x + 2] = spec.rgb[i][0];
            row[4 * x + 3] = 0xff;
            break;
          default: throw std::invalid_argument("make_bmp: unsupported bpp");
        }
      }
    }
  }

  const std::uint32_t offset = static_cast<std::uint32_t>(14 + 40 + 4 * palette_entries);
  ByteWriter w;
  w.u8('B');
  w.u8('M');
  w.u32(static_cast<std::uint32_t>(offset + pixels.size()));
  w.u32(0);
  w.u32(offset);
  w.u32(40);
  w.u32(spec.width);
  w.u32(spec.top_down ? static_cast<std::uint32_t>(-static_cast<std::int32_t>(spec.height)) : spec.height);
  w.u16(1);
  w.u16(spec.bpp);
  w.u32(spec.rle8 ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(pixels.size()));
  w.u32(2835);
  w.u32(2835);
  w.u32(static_cast<std::uint32_t>(palette_entries));
  w.u32(0);
  for (std::size_t i = 0; i < palette_entries; ++i) {
    w.u8(spec.palette[i][2]);
    w.u8(spec.palette[i][1]);
    w.u8(spec.palette[i][0]);
    w.u8(0);
  }
  w.bytes(pixels);
  return w.take();
}

namespace {

/// GIF LZW with the decoder's code width tracked explicitly.
std::vector<std::uint8_t> lzw_encode(std::span<const std::uint8_t> indices, unsigned min_code_size) {
  const unsigned clear = 1u << min_code_size;
  const unsigned end = clear + 1;
  std::vector<std::uint8_t> out;
  std::uint32_t buffer = 0;
  unsigned bit_count = 0;
  unsigned width = min_code_size + 1;

  const auto emit = [&](unsigned code) {
    buffer |= code << bit_count;
    bit_count += width;
    while (bit_count >= 8) {
      out.push_back(static_cast<std::uint8_t>(buffer & 0xff));
      buffer >>= 8;
      bit_count -= 8;
    }
  };

  std::map<std::pair<unsigned, std::uint8_t>, unsigned> dict;
  unsigned next = clear + 2;
  unsigned decoder_next = clear + 2;
  bool first_since_clear = true;
  const auto reset = [&] {
    dict.clear();
    next = clear + 2;
    decoder_next = clear + 2;
    width = min_code_size + 1;
    first_since_clear = true;
  };
  const auto emit_data = [&](unsigned code) {
    emit(code);
    if (first_since_clear) {
      first_since_clear = false;
      return;
    }
    if (decoder_next < 4096) {
      ++decoder_next;
      if (decoder_next == (1u << width) && width < 12) ++width;
    }
  };

  emit(clear);
  if (indices.empty()) {
    emit(end);
  } else {
    unsigned prefix = indices[0];
    for (std::size_t i = 1; i < indices.size(); ++i) {
      const std::uint8_t c = indices[i];
      const auto it = dict.find({prefix, c});
      if (it != dict.end()) {
        prefix = it->second;
        continue;
      }
      emit_data(prefix);
      dict[{prefix, c}] = next++;
      if (next >= 4095) {
        emit(clear);
        reset();
      }
      prefix = c;
    }
    emit_data(prefix);
    emit(end);
  }
  if (bit_count > 0) out.push_back(static_cast<std::uint8_t>(buffer & 0xff));
  return out;
}

void write_frame(ByteWriter& w, const GifSpec& spec, std::span<const std::uint8_t> indices, unsigned size_bits) {
  std::vector<std::uint8_t> ordered(indices.begin(), indices.end());
  if (spec.interlaced) {
    ordered.clear();
    for (const auto [start, step] : {std::pair{0u, 8u}, {4u, 8u}, {2u, 4u}, {1u, 2u}}) {
      for (std::uint32_t y = start; y < spec.height; y += step) {
        const auto row = indices.subspan(std::size_t{y} * spec.width, spec.width);
        ordered.insert(ordered.end(), row.begin(), row.end());
      }
    }
  }
  w.u8(0x2C);
  w.u16(0);
  w.u16(0);
  w.u16(spec.width);
  w.u16(spec.height);
  w.u8(spec.interlaced ? 0x40 : 0x00);
  const unsigned min_code_size = std::max(2u, size_bits);
  w.u8(min_code_size);
  const auto data = lzw_encode(ordered, min_code_size);
  for (std::size_t i = 0; i < data.size(); i += 255) {
    const std::size_t n = std::min<std::size_t>(255, data.size() - i);
    w.u8(static_cast<std::uint32_t>(n));
    w.bytes(std::span(data).subspan(i, n));
  }
  w.u8(0);
}

}  // namespace

std::vector<std::byte> make_gif(const GifSpec& spec) {
  unsigned size_bits = 1;
  while ((1u << size_bits) < spec.palette.size()) ++size_bits;
  ByteWriter w;
  for (const char c : std::string("GIF89a")) w.u8(static_cast<std::uint8_t>(c));
  w.u16(spec.width);
  w.u16(spec.height);
  w.u8(0x80 | 0x70 | (size_bits - 1));
  w.u8(0);
  w.u8(0);
  for (std::size_t i = 0; i < (1u << size_bits); ++i) {
    const auto c = i < spec.palette.size() ? spec.palette[i] : std::array<std::uint8_t, 3>{0, 0, 0};
    w.u8(c[0]);
    w.u8(c[1]);
    w.u8(c[2]);
  }
  // Graphic control extension, as animation tools write before each frame.
  for (const std::uint32_t b : {0x21u, 0xF9u, 4u, 0u, 10u, 0u, 0u, 0u}) w.u8(b);
  write_frame(w, spec, spec.indices, size_bits);
  if (!spec.second_frame.empty()) write_frame(w, spec, spec.second_frame, size_bits);
  w.u8(0x3B);
  return w.take();
}

std::vector<std::byte> make_jpeg(std::uint32_t width, std::uint32_t height, int components,
                                 std::span<const std::uint8_t> samples, bool progressive, int quality) {
  jpeg_compress_struct info{};
  jpeg_error_mgr errors{};
  info.err = jpeg_std_error(&errors);
  jpeg_create_compress(&info);
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  jpeg_mem_dest(&info, &buffer, &size);
  info.image_width = width;
  info.image_height = height;
  info.input_components = components;
  info.in_color_space = components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&info);
  jpeg_set_quality(&info, quality, TRUE);
  if (progressive) jpeg_simple_progression(&info);
  jpeg_start_compress(&info, TRUE);
  const std::size_t stride = std::size_t{width} * components;
  while (info.next_scanline < info.image_height) {
    auto* row = const_cast<JSAMPROW>(samples.data() + stride * info.next_scanline);
    jpeg_write_scanlines(&info, &row, 1);
  }
  jpeg_finish_compress(&info);
  jpeg_destroy_compress(&info);
  std::vector<std::byte> out(reinterpret_cast<std::byte*>(buffer), reinterpret_cast<std::byte*>(buffer) + size);
  std::free(buffer);
  return out;
}

namespace {

void append_png(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::byte>*>(png_get_io_ptr(png));
  out->insert(out->end(), reinterpret_cast<std::byte*>(data), reinterpret_cast<std::byte*>(data) + length);
}

std::vector<std::byte> write_png(std::uint32_t width, std::uint32_t height, int bit_depth, int color_type,
                                 const std::vector<std::uint8_t>& rows_data, std::size_t stride,
                                 const std::vector<std::array<std::uint8_t, 3>>* palette) {
  std::vector<std::byte> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_set_write_fn(png, &out, append_png, nullptr);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  std::vector<png_color> colors;
  if (palette != nullptr) {
    for (const auto& c : *palette) colors.push_back({c[0], c[1], c[2]});
    png_set_PLTE(png, info, colors.data(), static_cast<int>(colors.size()));
  }
  png_write_info(png, info);
  for (std::uint32_t y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rows_data.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

std::vector<std::byte> make_png16(std::uint32_t width, std::uint32_t height, int channels,
                                  std::span<const std::uint16_t> samples) {
  static constexpr int kTypes[] = {PNG_COLOR_TYPE_GRAY, PNG_COLOR_TYPE_GRAY_ALPHA, PNG_COLOR_TYPE_RGB,
                                   PNG_COLOR_TYPE_RGB_ALPHA};
  std::vector<std::uint8_t> data(samples.size() * 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    data[2 * i] = static_cast<std::uint8_t>(samples[i] >> 8);
    data[2 * i + 1] = static_cast<std::uint8_t>(samples[i] & 0xff);
  }
  return write_png(width, height, 16, kTypes[channels - 1], data, std::size_t{width} * channels * 2, nullptr);
}

std::vector<std::byte> make_png_palette(std::uint32_t width, std::uint32_t height,
                                        const std::vector<std::array<std::uint8_t, 3>>& palette,
                                        std::span<const std::uint8_t> indices) {
  std::vector<std::uint8_t> data(indices.begin(), indices.end());
  return write_png(width, height, 8, PNG_COLOR_TYPE_PALETTE, data, width, &palette);
}

ImageRecord random_image(std::mt19937_64& rng, std::uint32_t width, std::uint32_t height, BitDepth depth,
                         std::string name) {
  std::uniform_int_distribution<std::uint32_t> value(0, max_intensity(depth));
  std::vector<std::uint16_t> pixels(std::size_t{width} * height);
  for (auto& p : pixels) p = static_cast<std::uint16_t>(value(rng));
  return ImageRecord(std::move(name), width, height, depth, std::move(pixels));
}

ImageRecord clustered_image(std::mt19937_64& rng, std::uint32_t width, std::uint32_t height, BitDepth depth,
                            std::string name) {
  const std::uint32_t top = max_intensity(depth);
  std::uniform_int_distribution<std::uint32_t> centre_dist(0, top);
  std::uniform_int_distribution<std::uint32_t> spread_dist(0, 12);
  const std::uint32_t centre = centre_dist(rng);
  const std::uint32_t spread = spread_dist(rng);
  const std::uint32_t lo = centre > spread ? centre - spread : 0;
  const std::uint32_t hi = std::min(top, centre + spread);
  std::uniform_int_distribution<std::uint32_t> value(lo, hi);
  std::vector<std::uint16_t> pixels(std::size_t{width} * height);
  for (auto& p : pixels) p = static_cast<std::uint16_t>(value(rng));
  return ImageRecord(std::move(name), width, height, depth, std::move(pixels));
}

ImageRecord image_from(std::vector<std::uint16_t> pixels, std::uint32_t width, std::uint32_t height, BitDepth depth,
                       std::string name) {
  return ImageRecord(std::move(name), width, height, depth, std::move(pixels));
}

}  // namespace histoscope::testing
