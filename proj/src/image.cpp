#include "dv/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dv {

namespace {

void check_dims(int width, int height, const char* what) {
  if (width < 0 || height < 0) {
    throw std::invalid_argument(std::string(what) + ": negative dimensions");
  }
}

void check_range(const std::vector<double>& data, double lo, double hi, const char* what) {
  for (double v : data) {
    if (!(v >= lo && v <= hi)) {
      throw std::invalid_argument(std::string(what) + ": value " + std::to_string(v) +
                                  " outside [" + std::to_string(lo) + "," + std::to_string(hi) +
                                  "]");
    }
  }
}

}  // namespace

ImageRgb::ImageRgb(int width, int height) : width_(width), height_(height) {
  check_dims(width, height, "ImageRgb");
  data_.assign(pixel_count() * 3, 0.0);
}

ImageRgb::ImageRgb(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height, "ImageRgb");
  if (data_.size() != pixel_count() * 3) {
    throw std::invalid_argument("ImageRgb: data length " + std::to_string(data_.size()) +
                                " != width*height*3");
  }
  validate();
}

void ImageRgb::validate() const { check_range(data_, 0.0, 1.0, "ImageRgb"); }

ImageSigned::ImageSigned(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, "ImageSigned");
  if (channels <= 0) throw std::invalid_argument("ImageSigned: channels must be positive");
  data_.assign(static_cast<size_t>(width_) * height_ * channels_, 0.0);
}

ImageSigned::ImageSigned(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, "ImageSigned");
  if (channels <= 0) throw std::invalid_argument("ImageSigned: channels must be positive");
  if (data_.size() != static_cast<size_t>(width_) * height_ * channels_) {
    throw std::invalid_argument("ImageSigned: data length mismatch");
  }
  validate();
}

void ImageSigned::validate() const { check_range(data_, -1.0, 1.0, "ImageSigned"); }

GrayImage::GrayImage(int width, int height) : width_(width), height_(height) {
  check_dims(width, height, "GrayImage");
  values_.assign(static_cast<size_t>(width_) * height_, 0.0);
}

GrayImage::GrayImage(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height, "GrayImage");
  if (values_.size() != static_cast<size_t>(width_) * height_) {
    throw std::invalid_argument("GrayImage: data length mismatch");
  }
  check_range(values_, 0.0, 1.0, "GrayImage");
}

DepthMap::DepthMap(int width, int height) : width_(width), height_(height) {
  check_dims(width, height, "DepthMap");
  depth_.assign(static_cast<size_t>(width_) * height_, kInvalid);
  valid_.assign(static_cast<size_t>(width_) * height_, 0);
}

void DepthMap::set(int u, int v, double depth_m) {
  if (!(std::isfinite(depth_m) && depth_m >= 0.0)) {
    throw std::invalid_argument("DepthMap: depth must be finite and >= 0, got " +
                                std::to_string(depth_m));
  }
  depth_[index(u, v)] = depth_m;
  valid_[index(u, v)] = 1;
}

void DepthMap::clear(int u, int v) {
  depth_[index(u, v)] = kInvalid;
  valid_[index(u, v)] = 0;
}

size_t DepthMap::valid_count() const {
  size_t n = 0;
  for (uint8_t f : valid_) n += f;
  return n;
}

DenseDepth::DenseDepth(int width, int height, std::vector<double> depth)
    : width_(width), height_(height), depth_(std::move(depth)) {
  check_dims(width, height, "DenseDepth");
  if (depth_.size() != static_cast<size_t>(width_) * height_) {
    throw std::invalid_argument("DenseDepth: data length mismatch");
  }
  for (double d : depth_) {
    if (!(std::isfinite(d) && d >= 0.0)) {
      throw std::invalid_argument("DenseDepth: depth must be finite and >= 0");
    }
  }
}

ImageSigned to_signed(const ImageRgb& img) {
  std::vector<double> out(img.data().size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * img.data()[i] - 1.0;
  return ImageSigned(img.width(), img.height(), 3, std::move(out));
}

ImageRgb from_signed(const ImageSigned& img) {
  if (img.channels() != 3) {
    throw std::invalid_argument("from_signed: expected 3 channels, got " +
                                std::to_string(img.channels()));
  }
  std::vector<double> out(img.data().size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp((img.data()[i] + 1.0) / 2.0, 0.0, 1.0);
  }
  return ImageRgb(img.width(), img.height(), std::move(out));
}

}  // namespace dv
