#include "dv/lama.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dv {

namespace {

void check_same_dims(const ImageRgb& a, const ImageRgb& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("fuse: dimension mismatch " + std::to_string(a.width()) + "x" +
                                std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                                "x" + std::to_string(b.height()));
  }
}

}  // namespace

LamaConfig::LamaConfig(double low, double high, FusionMode m) : l_low(low), l_high(high), mode(m) {
  if (!(l_low >= 0.0 && l_low < l_high && l_high <= 1.0)) {
    throw std::invalid_argument("LamaConfig: need 0 <= l_low < l_high <= 1");
  }
}

GrayImage to_gray(const ImageRgb& img) {
  GrayImage out(img.width(), img.height());
  const auto& d = img.data();
  auto& g = out.mutable_values();
  for (size_t i = 0; i < g.size(); ++i) {
    g[i] = 0.2126 * d[3 * i] + 0.7152 * d[3 * i + 1] + 0.0722 * d[3 * i + 2];
  }
  return out;
}

double mean_luminance(const GrayImage& gray) {
  if (gray.values().empty()) {
    throw std::invalid_argument("mean_luminance: zero-pixel image");
  }
  double sum = 0.0;
  for (double v : gray.values()) sum += v;
  return sum / static_cast<double>(gray.values().size());
}

double alpha_global(double l_mean, const LamaConfig& cfg) {
  if (l_mean <= cfg.l_low) return 0.0;
  if (l_mean >= cfg.l_high) return 1.0;
  return (l_mean - cfg.l_low) / (cfg.l_high - cfg.l_low);
}

FusionResult fuse_full(const ImageRgb& rgb, const ImageRgb& gan, const LamaConfig& cfg) {
  check_same_dims(rgb, gan);
  const double alpha = alpha_global(mean_luminance(to_gray(rgb)), cfg);
  FusionResult r;
  r.mode = FusionMode::kFull;
  r.alpha_mean = r.alpha_min = r.alpha_max = alpha;
  // Exact at the band edges so the selected modality passes through
  // bit-identical.
  if (alpha == 0.0) {
    r.fused = gan;
    return r;
  }
  if (alpha == 1.0) {
    r.fused = rgb;
    return r;
  }
  std::vector<double> out(rgb.data().size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = alpha * rgb.data()[i] + (1.0 - alpha) * gan.data()[i];
  }
  r.fused = ImageRgb(rgb.width(), rgb.height(), std::move(out));
  return r;
}

FusionResult fuse_pixelwise(const ImageRgb& rgb, const ImageRgb& gan, const LamaConfig& cfg) {
  check_same_dims(rgb, gan);
  const GrayImage gray = to_gray(rgb);
  FusionResult r;
  r.mode = FusionMode::kPixelwise;
  r.alpha_min = 1.0;
  r.alpha_max = 0.0;
  double alpha_sum = 0.0;
  std::vector<double> out(rgb.data().size());
  const size_t n = gray.values().size();
  for (size_t i = 0; i < n; ++i) {
    const double a =
        std::clamp((gray.values()[i] - cfg.l_low) / (cfg.l_high - cfg.l_low), 0.0, 1.0);
    alpha_sum += a;
    r.alpha_min = std::min(r.alpha_min, a);
    r.alpha_max = std::max(r.alpha_max, a);
    for (int c = 0; c < 3; ++c) {
      const size_t j = 3 * i + static_cast<size_t>(c);
      out[j] = a * rgb.data()[j] + (1.0 - a) * gan.data()[j];
    }
  }
  r.alpha_mean = n > 0 ? alpha_sum / static_cast<double>(n) : 0.0;
  // Blends of in-range values stay in range; clamp only defends against the
  // last ulp of rounding.
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  r.fused = ImageRgb(rgb.width(), rgb.height(), std::move(out));
  return r;
}

}  // namespace dv
