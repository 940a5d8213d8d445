#pragma once

#include <cstdint>
#include <vector>

#include "dv/image.hpp"

namespace dv {

// For every pixel, the flat index (v*width + u) of the valid source pixel
// that wins the nearest-neighbor assignment: minimal Euclidean distance,
// ties broken by smallest row then smallest column. Exact; linear time.
// Throws std::invalid_argument when the map has no valid pixel.
std::vector<int32_t> densify_labels(const DepthMap& sparse);

// Eq.-5-style densification: each pixel takes the depth of its winning
// source pixel under the tie rule above.
DenseDepth densify_nearest(const DepthMap& sparse);

// Linear depth encoding for the generator input: clamp at max_range, then
// map [0, max_range] onto [-1, 1] (nearer = more negative).
ImageSigned encode_for_generator(const DenseDepth& dense, double max_range);

// Bump when the encoding changes; stored in weight files so trained models
// are tied to the encoding they saw.
inline constexpr uint32_t kDepthEncodingVersion = 1;

}  // namespace dv
