#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dv/image.hpp"

namespace dv {

// 8-bit PNG, value = round(255 * v). For human inspection; quantizes.
void write_png(const std::string& path, const ImageRgb& img);
void write_png(const std::string& path, const GrayImage& img);
std::vector<uint8_t> encode_png(const ImageRgb& img);

// Reads 8-bit RGB / RGBA / gray PNG into canonical [0,1] RGB (v = byte/255).
ImageRgb read_png(const std::string& path);
ImageRgb decode_png(const std::vector<uint8_t>& bytes);

// DVIM: lossless dump for bit-exact tests. 16-byte header (magic "DVIM",
// u32 width, u32 height, u32 channels, little-endian) followed by float64
// little-endian samples, row-major, channel-interleaved.
struct DvimData {
  uint32_t width = 0;
  uint32_t height = 0;
  uint32_t channels = 0;
  std::vector<double> data;
};

void write_dvim(const std::string& path, uint32_t width, uint32_t height, uint32_t channels,
                const std::vector<double>& data);
DvimData read_dvim(const std::string& path);

void write_dvim(const std::string& path, const ImageRgb& img);
void write_dvim(const std::string& path, const ImageSigned& img);
void write_dvim(const std::string& path, const DenseDepth& depth);
// Sparse maps use the NaN sentinel to mark invalid pixels inside the dump.
void write_dvim(const std::string& path, const DepthMap& map);

ImageRgb read_dvim_rgb(const std::string& path);
ImageSigned read_dvim_signed(const std::string& path);
DenseDepth read_dvim_dense(const std::string& path);
DepthMap read_dvim_depth_map(const std::string& path);

}  // namespace dv
