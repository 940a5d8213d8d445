#pragma once

// Scalar reference implementations used as test oracles. These deliberately
// avoid the library's code paths (and Eigen) so they stay independent of the
// implementations they check.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dv/image.hpp"

namespace oracle {

struct Calib {
  double r[9];  // row-major rotation
  double t[3];
  double fx, fy, cx, cy;
  int width, height;
};

struct ProjectedPoint {
  size_t index;
  double u, v, depth;
};

// Homogeneous-coordinate transform + pinhole projection + frustum predicate,
// written directly from the defining equations.
inline std::vector<ProjectedPoint> project_points(const std::vector<std::array<double, 3>>& pts,
                                                  const Calib& c) {
  std::vector<ProjectedPoint> out;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i][0], y = pts[i][1], z = pts[i][2];
    // 4x4 [R t; 0 1] times [x y z 1]
    const double xc = c.r[0] * x + c.r[1] * y + c.r[2] * z + c.t[0];
    const double yc = c.r[3] * x + c.r[4] * y + c.r[5] * z + c.t[1];
    const double zc = c.r[6] * x + c.r[7] * y + c.r[8] * z + c.t[2];
    if (!(zc > 0.0)) continue;
    const double u = c.fx * (xc / zc) + c.cx;
    const double v = c.fy * (yc / zc) + c.cy;
    if (u >= 0.0 && u < c.width && v >= 0.0 && v < c.height) {
      out.push_back({i, u, v, zc});
    }
  }
  return out;
}

// Per-cell minimum depth over all points whose floor(u),floor(v) equals the
// cell; O(cells * points).
inline std::vector<double> rasterize_min(const std::vector<ProjectedPoint>& pts, int width,
                                         int height) {
  std::vector<double> grid(static_cast<size_t>(width) * height,
                           std::numeric_limits<double>::infinity());
  for (const auto& p : pts) {
    const int cu = static_cast<int>(std::floor(p.u));
    const int cv = static_cast<int>(std::floor(p.v));
    double& cell = grid[static_cast<size_t>(cv) * width + cu];
    cell = std::min(cell, p.depth);
  }
  return grid;  // infinity = empty cell
}

// Nearest-valid-pixel assignment by exhaustive scan with the documented tie
// rule: smaller squared distance, then smaller row, then smaller column.
inline std::vector<int32_t> densify_brute_force(const dv::DepthMap& sparse) {
  const int w = sparse.width();
  const int h = sparse.height();
  std::vector<int32_t> labels(static_cast<size_t>(w) * h, -1);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      long best_d2 = -1;
      int best_row = -1, best_col = -1;
      for (int sv = 0; sv < h; ++sv) {
        for (int su = 0; su < w; ++su) {
          if (!sparse.valid(su, sv)) continue;
          const long d2 = static_cast<long>(u - su) * (u - su) +
                          static_cast<long>(v - sv) * (v - sv);
          if (best_d2 < 0 || d2 < best_d2 ||
              (d2 == best_d2 && (sv < best_row || (sv == best_row && su < best_col)))) {
            best_d2 = d2;
            best_row = sv;
            best_col = su;
          }
        }
      }
      labels[static_cast<size_t>(v) * w + u] =
          best_row < 0 ? -1 : static_cast<int32_t>(best_row) * w + best_col;
    }
  }
  return labels;
}

}  // namespace oracle
