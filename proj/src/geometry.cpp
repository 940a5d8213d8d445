#include "dv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dv {

Extrinsic::Extrinsic() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

Extrinsic::Extrinsic(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation,
                     double tolerance)
    : rotation_(rotation), translation_(translation) {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  const double ortho_err = (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho_err > tolerance) {
    throw std::invalid_argument("Extrinsic: rotation not orthonormal (error " +
                                std::to_string(ortho_err) + ")");
  }
  const double det = rotation.determinant();
  if (std::abs(det - 1.0) > 10.0 * tolerance) {
    if (det < 0.0) throw std::invalid_argument("Extrinsic: improper rotation (det = -1)");
    throw std::invalid_argument("Extrinsic: rotation determinant " + std::to_string(det));
  }
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(translation[i])) {
      throw std::invalid_argument("Extrinsic: non-finite translation");
    }
  }
}

Extrinsic Extrinsic::inverse() const {
  Eigen::Matrix3d rt = rotation_.transpose();
  Extrinsic inv;
  inv.rotation_ = rt;
  inv.translation_ = -(rt * translation_);
  return inv;
}

Extrinsic Extrinsic::compose(const Extrinsic& other) const {
  Extrinsic out;
  out.rotation_ = rotation_ * other.rotation_;
  out.translation_ = rotation_ * other.translation_ + translation_;
  return out;
}

Intrinsic::Intrinsic(double fx_, double fy_, double cx_, double cy_, int width_, int height_)
    : fx(fx_), fy(fy_), cx(cx_), cy(cy_), width(width_), height(height_) {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw std::invalid_argument("Intrinsic: focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("Intrinsic: image size must be positive");
  }
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw std::invalid_argument("Intrinsic: principal point outside image");
  }
}

PointCloud transform_to_camera(const PointCloud& cloud, const Extrinsic& ext) {
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) out.points.push_back(ext.apply(p));
  out.intensity = cloud.intensity;
  return out;
}

ProjectedPoints project(const PointCloud& cloud_cam, const Intrinsic& intr) {
  ProjectedPoints out;
  out.u.reserve(cloud_cam.points.size());
  out.v.reserve(cloud_cam.points.size());
  out.depth.reserve(cloud_cam.points.size());
  out.source_idx.reserve(cloud_cam.points.size());
  for (size_t i = 0; i < cloud_cam.points.size(); ++i) {
    const auto& p = cloud_cam.points[i];
    if (!(p.z() > 0.0)) continue;
    const double u = intr.fx * (p.x() / p.z()) + intr.cx;
    const double v = intr.fy * (p.y() / p.z()) + intr.cy;
    if (u >= 0.0 && u < intr.width && v >= 0.0 && v < intr.height) {
      out.u.push_back(u);
      out.v.push_back(v);
      out.depth.push_back(p.z());
      out.source_idx.push_back(i);
    }
  }
  return out;
}

DepthMap rasterize(const ProjectedPoints& proj, const Intrinsic& intr) {
  DepthMap map(intr.width, intr.height);
  for (size_t i = 0; i < proj.size(); ++i) {
    const int u = static_cast<int>(std::floor(proj.u[i]));
    const int v = static_cast<int>(std::floor(proj.v[i]));
    const double d = proj.depth[i];
    if (!map.valid(u, v) || d < map.depth(u, v)) {
      map.set(u, v, d);
    }
  }
  return map;
}

CropWindow crop_window(int width, int height, const Intrinsic& intr, int size) {
  if (size <= 0) throw std::invalid_argument("crop: size must be positive");
  if (size > width || size > height) {
    throw std::invalid_argument("crop larger than image: " + std::to_string(size) + " vs " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
  CropWindow w;
  w.size = size;
  w.u0 = std::clamp(static_cast<int>(std::lround(intr.cx)) - size / 2, 0, width - size);
  w.v0 = std::clamp(static_cast<int>(std::lround(intr.cy)) - size / 2, 0, height - size);
  return w;
}

DepthMap crop_center(const DepthMap& map, const Intrinsic& intr, int size) {
  const CropWindow w = crop_window(map.width(), map.height(), intr, size);
  DepthMap out(size, size);
  for (int v = 0; v < size; ++v) {
    for (int u = 0; u < size; ++u) {
      if (map.valid(w.u0 + u, w.v0 + v)) out.set(u, v, map.depth(w.u0 + u, w.v0 + v));
    }
  }
  return out;
}

ImageRgb crop_center(const ImageRgb& img, const Intrinsic& intr, int size) {
  const CropWindow w = crop_window(img.width(), img.height(), intr, size);
  ImageRgb out(size, size);
  for (int v = 0; v < size; ++v) {
    for (int u = 0; u < size; ++u) {
      for (int c = 0; c < 3; ++c) out.at(u, v, c) = img.at(w.u0 + u, w.v0 + v, c);
    }
  }
  return out;
}

}  // namespace dv
