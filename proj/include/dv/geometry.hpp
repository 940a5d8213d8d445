#pragma once

#include <Eigen/Core>
#include <vector>

#include "dv/image.hpp"

namespace dv {

// Rigid transform mapping LiDAR-frame points into the camera frame.
// The rotation must be orthonormal with determinant +1.
class Extrinsic {
 public:
  Extrinsic();  // identity
  Extrinsic(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation,
            double tolerance = 1e-9);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation_ * p + translation_; }
  Extrinsic inverse() const;
  // this ∘ other: applies `other` first.
  Extrinsic compose(const Extrinsic& other) const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

// Pinhole camera parameters plus image size.
struct Intrinsic {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  Intrinsic() = default;
  Intrinsic(double fx, double fy, double cx, double cy, int width, int height);
};

// Retained image-plane projections; parallel arrays plus indices into the
// originating cloud.
struct ProjectedPoints {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> depth;       // camera-frame Z
  std::vector<size_t> source_idx;  // index into the projected cloud

  size_t size() const { return u.size(); }
};

// R*p + t for every point; intensity is carried through unchanged.
PointCloud transform_to_camera(const PointCloud& cloud, const Extrinsic& ext);

// Pinhole projection. Points with Z <= 0 are discarded before the division;
// retained points satisfy 0 <= u < W and 0 <= v < H.
ProjectedPoints project(const PointCloud& cloud_cam, const Intrinsic& intr);

// Continuous (u,v) to grid cells by floor(); minimum depth wins per cell.
DepthMap rasterize(const ProjectedPoints& proj, const Intrinsic& intr);

// size x size window centered at (round(cx), round(cy)), shifted minimally
// to stay inside the image. Throws std::invalid_argument when size exceeds
// either image dimension.
struct CropWindow {
  int u0 = 0;
  int v0 = 0;
  int size = 0;
};
CropWindow crop_window(int width, int height, const Intrinsic& intr, int size);
DepthMap crop_center(const DepthMap& map, const Intrinsic& intr, int size = 600);
ImageRgb crop_center(const ImageRgb& img, const Intrinsic& intr, int size = 600);

}  // namespace dv
