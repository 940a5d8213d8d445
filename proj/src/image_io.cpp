#include "dv/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "dv/errors.hpp"

namespace dv {

namespace {

uint8_t quantize(double v) {
  return static_cast<uint8_t>(std::lround(255.0 * v));
}

struct PngWriteBuffer {
  std::vector<uint8_t>* out;
};

void png_buffer_write(png_structp png, png_bytep data, png_size_t len) {
  auto* buf = static_cast<PngWriteBuffer*>(png_get_io_ptr(png));
  buf->out->insert(buf->out->end(), data, data + len);
}

void png_buffer_flush(png_structp) {}

struct PngReadBuffer {
  const uint8_t* data;
  size_t size;
  size_t pos;
};

void png_buffer_read(png_structp png, png_bytep out, png_size_t len) {
  auto* buf = static_cast<PngReadBuffer*>(png_get_io_ptr(png));
  if (buf->pos + len > buf->size) {
    png_error(png, "read past end of PNG buffer");
  }
  std::memcpy(out, buf->data + buf->pos, len);
  buf->pos += len;
}

// Encodes interleaved 8-bit rows. channels is 1 (gray) or 3 (rgb).
void encode_png_impl(const std::vector<uint8_t>& pixels, int width, int height, int channels,
                     FILE* file, std::vector<uint8_t>* mem_out) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng: write failed");
  }
  PngWriteBuffer buf{mem_out};
  if (mem_out) {
    png_set_write_fn(png, &buf, png_buffer_write, png_buffer_flush);
  } else {
    png_init_io(png, file);
  }
  const int color = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  std::vector<png_bytep> rows(static_cast<size_t>(height));
  for (int v = 0; v < height; ++v) {
    rows[static_cast<size_t>(v)] =
        const_cast<png_bytep>(pixels.data() + static_cast<size_t>(v) * width * channels);
  }
  png_write_image(png, rows.data());
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

std::vector<uint8_t> quantize_rgb(const ImageRgb& img) {
  std::vector<uint8_t> px(img.data().size());
  for (size_t i = 0; i < px.size(); ++i) px[i] = quantize(img.data()[i]);
  return px;
}

ImageRgb decode_png_impl(FILE* file, const std::vector<uint8_t>* mem) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng: decode failed (corrupt PNG?)");
  }
  PngReadBuffer buf{mem ? mem->data() : nullptr, mem ? mem->size() : 0, 0};
  if (mem) {
    png_set_read_fn(png, &buf, png_buffer_read);
  } else {
    png_init_io(png, file);
  }
  png_read_info(png, info);

  // Normalize every supported layout to 8-bit RGB.
  png_set_expand(png);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  png_set_strip_alpha(png);
  const png_byte color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  std::vector<uint8_t> raw(static_cast<size_t>(width) * height * 3);
  std::vector<png_bytep> rows(static_cast<size_t>(height));
  for (int v = 0; v < height; ++v) {
    rows[static_cast<size_t>(v)] = raw.data() + static_cast<size_t>(v) * width * 3;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> data(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) data[i] = raw[i] / 255.0;
  return ImageRgb(width, height, std::move(data));
}

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path);
  return f;
}

}  // namespace

void write_png(const std::string& path, const ImageRgb& img) {
  FilePtr f = open_file(path, "wb");
  encode_png_impl(quantize_rgb(img), img.width(), img.height(), 3, f.get(), nullptr);
}

void write_png(const std::string& path, const GrayImage& img) {
  std::vector<uint8_t> px(img.values().size());
  for (size_t i = 0; i < px.size(); ++i) px[i] = quantize(img.values()[i]);
  FilePtr f = open_file(path, "wb");
  encode_png_impl(px, img.width(), img.height(), 1, f.get(), nullptr);
}

std::vector<uint8_t> encode_png(const ImageRgb& img) {
  std::vector<uint8_t> out;
  encode_png_impl(quantize_rgb(img), img.width(), img.height(), 3, nullptr, &out);
  return out;
}

ImageRgb read_png(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  return decode_png_impl(f.get(), nullptr);
}

ImageRgb decode_png(const std::vector<uint8_t>& bytes) { return decode_png_impl(nullptr, &bytes); }

namespace {

void put_u32(std::ofstream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

void write_dvim(const std::string& path, uint32_t width, uint32_t height, uint32_t channels,
                const std::vector<double>& data) {
  if (data.size() != static_cast<size_t>(width) * height * channels) {
    throw std::invalid_argument("write_dvim: data length mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  out.write("DVIM", 4);
  put_u32(out, width);
  put_u32(out, height);
  put_u32(out, channels);
  // Assumes little-endian host for the float64 payload, as does every other
  // binary format in this project.
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path);
}

DvimData read_dvim(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DVIM", 4) != 0) {
    throw IoError(path + ": not a DVIM file");
  }
  DvimData d;
  d.width = get_u32(in);
  d.height = get_u32(in);
  d.channels = get_u32(in);
  if (!in) throw IoError(path + ": truncated DVIM header");
  const size_t count = static_cast<size_t>(d.width) * d.height * d.channels;
  d.data.resize(count);
  in.read(reinterpret_cast<char*>(d.data.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw IoError(path + ": truncated DVIM payload");
  return d;
}

void write_dvim(const std::string& path, const ImageRgb& img) {
  write_dvim(path, static_cast<uint32_t>(img.width()), static_cast<uint32_t>(img.height()), 3,
             img.data());
}

void write_dvim(const std::string& path, const ImageSigned& img) {
  write_dvim(path, static_cast<uint32_t>(img.width()), static_cast<uint32_t>(img.height()),
             static_cast<uint32_t>(img.channels()), img.data());
}

void write_dvim(const std::string& path, const DenseDepth& depth) {
  write_dvim(path, static_cast<uint32_t>(depth.width()), static_cast<uint32_t>(depth.height()), 1,
             depth.depth_data());
}

void write_dvim(const std::string& path, const DepthMap& map) {
  write_dvim(path, static_cast<uint32_t>(map.width()), static_cast<uint32_t>(map.height()), 1,
             map.depth_data());
}

ImageRgb read_dvim_rgb(const std::string& path) {
  DvimData d = read_dvim(path);
  if (d.channels != 3) throw IoError(path + ": expected 3 channels");
  return ImageRgb(static_cast<int>(d.width), static_cast<int>(d.height), std::move(d.data));
}

ImageSigned read_dvim_signed(const std::string& path) {
  DvimData d = read_dvim(path);
  return ImageSigned(static_cast<int>(d.width), static_cast<int>(d.height),
                     static_cast<int>(d.channels), std::move(d.data));
}

DenseDepth read_dvim_dense(const std::string& path) {
  DvimData d = read_dvim(path);
  if (d.channels != 1) throw IoError(path + ": expected 1 channel");
  return DenseDepth(static_cast<int>(d.width), static_cast<int>(d.height), std::move(d.data));
}

DepthMap read_dvim_depth_map(const std::string& path) {
  DvimData d = read_dvim(path);
  if (d.channels != 1) throw IoError(path + ": expected 1 channel");
  DepthMap map(static_cast<int>(d.width), static_cast<int>(d.height));
  for (int v = 0; v < map.height(); ++v) {
    for (int u = 0; u < map.width(); ++u) {
      const double value = d.data[map.index(u, v)];
      if (!std::isnan(value)) map.set(u, v, value);
    }
  }
  return map;
}

}  // namespace dv
