#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <vector>

namespace dv {

// Canonical RGB image: interleaved (R,G,B) doubles in [0,1], row-major,
// pixel addressed as (u = column, v = row). Construction validates the
// range; every operation downstream may assume it.
class ImageRgb {
 public:
  ImageRgb() = default;
  ImageRgb(int width, int height);                             // zero-filled
  ImageRgb(int width, int height, std::vector<double> data);   // validated

  int width() const { return width_; }
  int height() const { return height_; }
  size_t pixel_count() const { return static_cast<size_t>(width_) * height_; }

  double& at(int u, int v, int ch) { return data_[idx(u, v, ch)]; }
  double at(int u, int v, int ch) const { return data_[idx(u, v, ch)]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& mutable_data() { return data_; }

  // Re-checks the [0,1] invariant after in-place edits through mutable_data().
  void validate() const;

 private:
  size_t idx(int u, int v, int ch) const {
    return (static_cast<size_t>(v) * width_ + u) * 3 + ch;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Values in [-1,1]; the GAN's I/O domain. Channel count is explicit because
// depth encodings are single-channel and RGB is three.
class ImageSigned {
 public:
  ImageSigned() = default;
  ImageSigned(int width, int height, int channels);
  ImageSigned(int width, int height, int channels, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  double& at(int u, int v, int ch) { return data_[idx(u, v, ch)]; }
  double at(int u, int v, int ch) const { return data_[idx(u, v, ch)]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& mutable_data() { return data_; }
  void validate() const;

 private:
  size_t idx(int u, int v, int ch) const {
    return (static_cast<size_t>(v) * width_ + u) * channels_ + ch;
  }
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

// Single-channel luminance in [0,1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height);
  GrayImage(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }

  double& at(int u, int v) { return values_[static_cast<size_t>(v) * width_ + u]; }
  double at(int u, int v) const { return values_[static_cast<size_t>(v) * width_ + u]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// Depth in meters with a validity mask. Invalid pixels hold a quiet NaN
// sentinel; no operation reads depth where valid() is false.
class DepthMap {
 public:
  static constexpr double kInvalid = std::numeric_limits<double>::quiet_NaN();

  DepthMap() = default;
  DepthMap(int width, int height);  // all-invalid

  int width() const { return width_; }
  int height() const { return height_; }

  bool valid(int u, int v) const { return valid_[index(u, v)] != 0; }
  double depth(int u, int v) const { return depth_[index(u, v)]; }

  void set(int u, int v, double depth_m);
  void clear(int u, int v);

  size_t valid_count() const;
  size_t index(int u, int v) const { return static_cast<size_t>(v) * width_ + u; }

  const std::vector<double>& depth_data() const { return depth_; }
  const std::vector<uint8_t>& valid_data() const { return valid_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> depth_;
  std::vector<uint8_t> valid_;
};

// Fully valid depth grid produced by densification.
class DenseDepth {
 public:
  DenseDepth() = default;
  DenseDepth(int width, int height, std::vector<double> depth);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int u, int v) const { return depth_[static_cast<size_t>(v) * width_ + u]; }
  const std::vector<double>& depth_data() const { return depth_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> depth_;
};

// 3D points in the sensor frame, optional per-point intensity.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<float> intensity;  // empty, or one entry per point

  size_t size() const { return points.size(); }
  bool has_intensity() const { return !intensity.empty(); }
};

// Boundary conversions between canonical [0,1] and the GAN domain [-1,1].
ImageSigned to_signed(const ImageRgb& img);
ImageRgb from_signed(const ImageSigned& img);

}  // namespace dv
