#include <cstdio>
#include <csetjmp>

#include <jpeglib.h>

#include "codecs.hpp"

namespace histoscope::codec {
namespace {

struct JpegRead {
  jpeg_decompress_struct info{};
  jpeg_error_mgr errors{};
  std::jmp_buf jump{};
  bool created = false;
  char message[JMSG_LENGTH_MAX] = {};

  int channels = 0;
  std::vector<std::uint8_t> buffer;

  ~JpegRead() {
    if (created) jpeg_destroy_decompress(&info);
  }
};

void on_error_exit(j_common_ptr cinfo) {
  auto* ctx = reinterpret_cast<JpegRead*>(cinfo->client_data);
  (*cinfo->err->format_message)(cinfo, ctx->message);
  std::longjmp(ctx->jump, 1);
}

void on_output_message(j_common_ptr) {}

enum class ReadStatus { Ok, Failed, Cmyk, TooLarge };

ReadStatus read_jpeg(JpegRead& ctx, std::span<const std::byte> bytes) {
  if (setjmp(ctx.jump)) return ReadStatus::Failed;

  jpeg_create_decompress(&ctx.info);
  ctx.created = true;
  jpeg_mem_src(&ctx.info, reinterpret_cast<const unsigned char*>(bytes.data()),
               static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&ctx.info, TRUE);
  if (std::uint64_t{ctx.info.image_width} * ctx.info.image_height > kMaxDecodedPixels) return ReadStatus::TooLarge;

  switch (ctx.info.jpeg_color_space) {
    case JCS_GRAYSCALE:
      ctx.info.out_color_space = JCS_GRAYSCALE;
      break;
    case JCS_CMYK:
    case JCS_YCCK:
      return ReadStatus::Cmyk;
    default:
      ctx.info.out_color_space = JCS_RGB;
      break;
  }
  jpeg_start_decompress(&ctx.info);

  ctx.channels = ctx.info.output_components;
  const std::size_t stride = std::size_t{ctx.info.output_width} * ctx.info.output_components;
  ctx.buffer.resize(stride * ctx.info.output_height);
  while (ctx.info.output_scanline < ctx.info.output_height) {
    JSAMPROW row = ctx.buffer.data() + stride * ctx.info.output_scanline;
    jpeg_read_scanlines(&ctx.info, &row, 1);
  }
  jpeg_finish_decompress(&ctx.info);
  return ReadStatus::Ok;
}

}  // namespace

ImageRecord decode_jpeg(std::span<const std::byte> bytes, std::string name) {
  JpegRead ctx;
  ctx.info.err = jpeg_std_error(&ctx.errors);
  ctx.errors.error_exit = on_error_exit;
  ctx.errors.output_message = on_output_message;
  ctx.info.client_data = &ctx;

  switch (read_jpeg(ctx, bytes)) {
    case ReadStatus::Failed: corrupt(name, std::string("invalid JPEG: ") + ctx.message);
    case ReadStatus::Cmyk:
      throw Error(ErrorCode::UnsupportedFormat, name + ": CMYK JPEG images are not supported");
    case ReadStatus::TooLarge: check_dimensions(name, ctx.info.image_width, ctx.info.image_height); break;
    case ReadStatus::Ok: break;
  }

  const std::uint32_t width = ctx.info.output_width;
  const std::uint32_t height = ctx.info.output_height;
  auto pixels = interleaved8_to_gray(ctx.buffer, std::size_t{width} * height, ctx.channels);
  return ImageRecord(std::move(name), width, height, BitDepth::k8, std::move(pixels));
}

}  // namespace histoscope::codec
