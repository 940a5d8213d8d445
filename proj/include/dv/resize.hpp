#pragma once

#include "dv/image.hpp"

namespace dv {

// Bilinear resampling with half-pixel centers: src = (dst + 0.5)*scale - 0.5,
// edge-clamped. Used only at the neural boundary (crop size <-> generator
// size); geometry and fusion never resample.
ImageRgb resize_bilinear(const ImageRgb& img, int out_width, int out_height);
ImageSigned resize_bilinear(const ImageSigned& img, int out_width, int out_height);

// Bump when the resampling convention changes; stored in weight files.
inline constexpr uint32_t kResizeVersion = 1;

}  // namespace dv
