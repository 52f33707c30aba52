#include <png.h>

#include <csetjmp>
#include <cstring>
#include <string>

#include "codecs.hpp"
#include "histoscope/png.hpp"

namespace histoscope {
namespace codec {
namespace {

// libpng reports errors by longjmp. All state touched after setjmp lives in
// these structs (reached through references), never in automatic variables.
struct PngRead {
  std::span<const std::byte> data;
  std::size_t offset = 0;
  std::string message;
  png_structp png = nullptr;
  png_infop info = nullptr;

  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  int channels = 0;
  std::vector<std::uint8_t> buffer;
  std::vector<png_bytep> rows;

  ~PngRead() {
    if (png != nullptr) png_destroy_read_struct(&png, info != nullptr ? &info : nullptr, nullptr);
  }
};

void on_error(png_structp png, png_const_charp message) {
  auto* ctx = static_cast<std::string*>(png_get_error_ptr(png));
  *ctx = message;
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

void on_read(png_structp png, png_bytep out, png_size_t length) {
  auto* ctx = static_cast<PngRead*>(png_get_io_ptr(png));
  if (length > ctx->data.size() - ctx->offset) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, ctx->data.data() + ctx->offset, length);
  ctx->offset += length;
}

enum class ReadStatus { Ok, Failed, SixteenBitColor, TooLarge };

ReadStatus read_png(PngRead& ctx) {
  if (setjmp(png_jmpbuf(ctx.png))) return ReadStatus::Failed;

  png_set_read_fn(ctx.png, &ctx, on_read);
  png_read_info(ctx.png, ctx.info);
  png_get_IHDR(ctx.png, ctx.info, &ctx.width, &ctx.height, &ctx.bit_depth, &ctx.color_type,
               nullptr, nullptr, nullptr);

  if (ctx.bit_depth == 16 && ctx.color_type != PNG_COLOR_TYPE_GRAY) {
    return ReadStatus::SixteenBitColor;
  }
  if (std::uint64_t{ctx.width} * ctx.height > kMaxDecodedPixels) return ReadStatus::TooLarge;
  if (ctx.color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (ctx.color_type == PNG_COLOR_TYPE_GRAY && ctx.bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  }
  if ((ctx.color_type & PNG_COLOR_MASK_ALPHA) != 0) png_set_strip_alpha(ctx.png);
  png_set_interlace_handling(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  ctx.channels = png_get_channels(ctx.png, ctx.info);
  ctx.bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const std::size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
  ctx.buffer.resize(row_bytes * ctx.height);
  ctx.rows.resize(ctx.height);
  for (png_uint_32 y = 0; y < ctx.height; ++y) ctx.rows[y] = ctx.buffer.data() + y * row_bytes;
  png_read_image(ctx.png, ctx.rows.data());
  png_read_end(ctx.png, nullptr);
  return ReadStatus::Ok;
}

struct PngWrite {
  std::vector<std::byte> out;
  std::string message;
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngWrite() {
    if (png != nullptr) png_destroy_write_struct(&png, info != nullptr ? &info : nullptr);
  }
};

void on_write(png_structp png, png_bytep data, png_size_t length) {
  auto* ctx = static_cast<PngWrite*>(png_get_io_ptr(png));
  const auto* first = reinterpret_cast<const std::byte*>(data);
  ctx->out.insert(ctx->out.end(), first, first + length);
}

void on_flush(png_structp) {}

struct RasterDescription {
  std::uint32_t width;
  std::uint32_t height;
  int bit_depth;
  int color_type;
  std::size_t row_bytes;
  const std::uint8_t* data;  // big-endian samples for 16-bit
};

bool write_png(PngWrite& ctx, const RasterDescription& raster) {
  if (setjmp(png_jmpbuf(ctx.png))) return false;

  png_set_write_fn(ctx.png, &ctx, on_write, on_flush);
  png_set_IHDR(ctx.png, ctx.info, raster.width, raster.height, raster.bit_depth, raster.color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(ctx.png, 6);

  static char key[] = "Software";
  static char value[] = "histoscope " HISTOSCOPE_VERSION;
  png_text text{};
  text.compression = PNG_TEXT_COMPRESSION_NONE;
  text.key = key;
  text.text = value;
  png_set_text(ctx.png, ctx.info, &text, 1);

  png_write_info(ctx.png, ctx.info);
  for (std::uint32_t y = 0; y < raster.height; ++y) {
    png_write_row(ctx.png, raster.data + std::size_t{y} * raster.row_bytes);
  }
  png_write_end(ctx.png, nullptr);
  return true;
}

std::vector<std::byte> encode(const RasterDescription& raster) {
  PngWrite ctx;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx.message, on_error, on_warning);
  if (ctx.png == nullptr) throw std::bad_alloc();
  ctx.info = png_create_info_struct(ctx.png);
  if (ctx.info == nullptr) throw std::bad_alloc();
  if (!write_png(ctx, raster)) throw std::runtime_error("PNG encoding failed: " + ctx.message);
  return std::move(ctx.out);
}

}  // namespace

ImageRecord decode_png(std::span<const std::byte> bytes, std::string name) {
  PngRead ctx;
  ctx.data = bytes;
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx.message, on_error, on_warning);
  if (ctx.png == nullptr) throw std::bad_alloc();
  ctx.info = png_create_info_struct(ctx.png);
  if (ctx.info == nullptr) throw std::bad_alloc();

  switch (read_png(ctx)) {
    case ReadStatus::Failed: corrupt(name, "invalid PNG: " + ctx.message);
    case ReadStatus::SixteenBitColor: sixteen_bit_color(name);
    case ReadStatus::TooLarge: check_dimensions(name, ctx.width, ctx.height); break;
    case ReadStatus::Ok: break;
  }

  const std::size_t count = std::size_t{ctx.width} * ctx.height;
  if (ctx.bit_depth == 16) {
    // Only single-channel 16-bit data gets here; samples are big-endian.
    std::vector<std::uint16_t> pixels(count);
    for (std::size_t i = 0; i < count; ++i) {
      pixels[i] = static_cast<std::uint16_t>((ctx.buffer[2 * i] << 8) | ctx.buffer[2 * i + 1]);
    }
    return ImageRecord(std::move(name), ctx.width, ctx.height, BitDepth::k16, std::move(pixels));
  }
  auto pixels = interleaved8_to_gray(ctx.buffer, count, ctx.channels);
  return ImageRecord(std::move(name), ctx.width, ctx.height, BitDepth::k8, std::move(pixels));
}

}  // namespace codec

std::vector<std::byte> encode_png_rgba(std::uint32_t width, std::uint32_t height,
                                       std::span<const std::uint8_t> rgba) {
  if (rgba.size() != std::size_t{width} * height * 4) {
    throw std::invalid_argument("encode_png_rgba: buffer size does not match dimensions");
  }
  return codec::encode({width, height, 8, PNG_COLOR_TYPE_RGBA, std::size_t{width} * 4, rgba.data()});
}

std::vector<std::byte> encode_png_color8(std::uint32_t width, std::uint32_t height, int channels,
                                         std::span<const std::uint8_t> samples) {
  if ((channels != 3 && channels != 4) ||
      samples.size() != std::size_t{width} * height * static_cast<std::size_t>(channels)) {
    throw std::invalid_argument("encode_png_color8: bad channel count or buffer size");
  }
  const int type = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_RGBA;
  return codec::encode({width, height, 8, type, std::size_t{width} * channels, samples.data()});
}

std::vector<std::byte> encode_png_gray(const ImageRecord& image) {
  const auto pixels = image.pixels();
  if (image.bit_depth() == BitDepth::k8) {
    std::vector<std::uint8_t> samples(pixels.begin(), pixels.end());
    return codec::encode({image.width(), image.height(), 8, PNG_COLOR_TYPE_GRAY, image.width(),
                          samples.data()});
  }
  std::vector<std::uint8_t> samples(pixels.size() * 2);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    samples[2 * i] = static_cast<std::uint8_t>(pixels[i] >> 8);
    samples[2 * i + 1] = static_cast<std::uint8_t>(pixels[i] & 0xff);
  }
  return codec::encode({image.width(), image.height(), 16, PNG_COLOR_TYPE_GRAY,
                        std::size_t{image.width()} * 2, samples.data()});
}

}  // namespace histoscope
