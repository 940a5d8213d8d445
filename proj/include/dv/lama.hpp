#pragma once

#include <string>

#include "dv/image.hpp"

namespace dv {

enum class FusionMode { kFull, kPixelwise };

// Luminance thresholds bounding the blend band. Defaults follow the
// low-light switching point (0.15) and the full-confidence point (0.35).
struct LamaConfig {
  double l_low = 0.15;
  double l_high = 0.35;
  FusionMode mode = FusionMode::kFull;

  LamaConfig() = default;
  LamaConfig(double low, double high, FusionMode m = FusionMode::kFull);
};

struct FusionResult {
  ImageRgb fused;
  double alpha_mean = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  FusionMode mode = FusionMode::kFull;
};

// Rec. 709 luminance: 0.2126 R + 0.7152 G + 0.0722 B.
GrayImage to_gray(const ImageRgb& img);

// Arithmetic mean over all pixels; throws on zero-pixel images.
double mean_luminance(const GrayImage& gray);

// Global blend weight: 0 below the band, 1 above, linear ramp inside.
double alpha_global(double l_mean, const LamaConfig& cfg);

// fused = alpha * rgb + (1 - alpha) * gan, alpha from the rgb image's mean
// luminance. Returns gan bit-exactly at alpha = 0 and rgb at alpha = 1.
FusionResult fuse_full(const ImageRgb& rgb, const ImageRgb& gan, const LamaConfig& cfg);

// Per-pixel alpha(u,v) = clamp((gray - l_low) / (l_high - l_low), 0, 1).
FusionResult fuse_pixelwise(const ImageRgb& rgb, const ImageRgb& gan, const LamaConfig& cfg);

}  // namespace dv
