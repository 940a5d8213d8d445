#include "dv/resize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dv {

namespace {

// Interleaved-channel bilinear resample on raw doubles.
std::vector<double> resample(const std::vector<double>& src, int sw, int sh, int channels, int dw,
                             int dh) {
  if (dw <= 0 || dh <= 0) throw std::invalid_argument("resize: output size must be positive");
  if (sw <= 0 || sh <= 0) throw std::invalid_argument("resize: empty input");
  std::vector<double> dst(static_cast<size_t>(dw) * dh * channels);
  const double sx = static_cast<double>(sw) / dw;
  const double sy = static_cast<double>(sh) / dh;
  for (int v = 0; v < dh; ++v) {
    const double fy = (v + 0.5) * sy - 0.5;
    const double fy_cl = std::clamp(fy, 0.0, static_cast<double>(sh - 1));
    const int y0 = static_cast<int>(std::floor(fy_cl));
    const int y1 = std::min(y0 + 1, sh - 1);
    const double wy = fy_cl - y0;
    for (int u = 0; u < dw; ++u) {
      const double fx = (u + 0.5) * sx - 0.5;
      const double fx_cl = std::clamp(fx, 0.0, static_cast<double>(sw - 1));
      const int x0 = static_cast<int>(std::floor(fx_cl));
      const int x1 = std::min(x0 + 1, sw - 1);
      const double wx = fx_cl - x0;
      for (int c = 0; c < channels; ++c) {
        const double a = src[(static_cast<size_t>(y0) * sw + x0) * channels + c];
        const double b = src[(static_cast<size_t>(y0) * sw + x1) * channels + c];
        const double d = src[(static_cast<size_t>(y1) * sw + x0) * channels + c];
        const double e = src[(static_cast<size_t>(y1) * sw + x1) * channels + c];
        const double top = a + wx * (b - a);
        const double bot = d + wx * (e - d);
        dst[(static_cast<size_t>(v) * dw + u) * channels + c] = top + wy * (bot - top);
      }
    }
  }
  return dst;
}

}  // namespace

ImageRgb resize_bilinear(const ImageRgb& img, int out_width, int out_height) {
  if (out_width == img.width() && out_height == img.height()) return img;
  std::vector<double> out = resample(img.data(), img.width(), img.height(), 3, out_width, out_height);
  // Interpolation of in-range values stays in range up to rounding.
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return ImageRgb(out_width, out_height, std::move(out));
}

ImageSigned resize_bilinear(const ImageSigned& img, int out_width, int out_height) {
  if (out_width == img.width() && out_height == img.height()) return img;
  std::vector<double> out =
      resample(img.data(), img.width(), img.height(), img.channels(), out_width, out_height);
  for (double& v : out) v = std::clamp(v, -1.0, 1.0);
  return ImageSigned(out_width, out_height, img.channels(), std::move(out));
}

}  // namespace dv
