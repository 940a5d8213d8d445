#include "dv/densify.hpp"

#include <algorithm>
#include <stdexcept>

namespace dv {

namespace {

// The per-pixel winner minimizes the lexicographic key
// (distance^2, site_row, site_col). Folding the key into one integer,
//   E = distance^2 * M^2 + site_row * M + site_col      (M > max dimension),
// makes the minimum unique: two sites in distinct columns can never produce
// equal E at an integer pixel, so the lower-envelope scan below needs no tie
// handling as long as boundary comparisons are exact. Boundaries are kept as
// rationals and compared with 128-bit cross-multiplication.
constexpr int64_t kM = 8192;
constexpr int64_t kM2 = kM * kM;

struct Boundary {
  // num/den with den > 0; den == 0 encodes -inf (num < 0) or +inf (num > 0).
  int64_t num;
  int64_t den;
};

bool boundary_le(const Boundary& a, const Boundary& b) {
  if (a.den == 0 || b.den == 0) {
    const int sa = a.den == 0 ? (a.num < 0 ? -1 : 1) : 0;
    const int sb = b.den == 0 ? (b.num < 0 ? -1 : 1) : 0;
    if (a.den == 0 && b.den == 0) return sa <= sb;
    if (a.den == 0) return sa < 0;
    return sb > 0;
  }
  return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
}

bool boundary_lt_int(const Boundary& a, int64_t x) {
  if (a.den == 0) return a.num < 0;
  return static_cast<__int128>(a.num) < static_cast<__int128>(x) * a.den;
}

}  // namespace

std::vector<int32_t> densify_labels(const DepthMap& sparse) {
  const int w = sparse.width();
  const int h = sparse.height();
  if (w >= kM || h >= kM) {
    throw std::invalid_argument("densify: image dimension exceeds supported maximum");
  }
  if (sparse.valid_count() == 0) {
    throw std::invalid_argument("empty sparse map");
  }

  // Pass 1, per column: nearest valid row (ties -> smaller row, which is
  // always the upper candidate). nearest_row = -1 marks an empty column.
  std::vector<int32_t> nearest_row(static_cast<size_t>(w) * h, -1);
  for (int u = 0; u < w; ++u) {
    int prev = -1;
    for (int v = 0; v < h; ++v) {
      if (sparse.valid(u, v)) prev = v;
      nearest_row[static_cast<size_t>(v) * w + u] = prev;
    }
    int next = -1;
    for (int v = h - 1; v >= 0; --v) {
      if (sparse.valid(u, v)) next = v;
      const size_t i = static_cast<size_t>(v) * w + u;
      const int above = nearest_row[i];
      if (above < 0) {
        nearest_row[i] = next;
      } else if (next >= 0) {
        const int64_t da = v - above;
        const int64_t db = next - v;
        if (db * db < da * da) nearest_row[i] = next;
      }
    }
  }

  // Pass 2, per row: lower envelope of parabolas
  //   f_q(x) = M^2 * (x - q)^2 + C(q),
  // one per column q that holds a site, with C(q) folding in the in-column
  // distance and the tie payload.
  std::vector<int32_t> labels(static_cast<size_t>(w) * h, -1);
  std::vector<int> hull_pos(static_cast<size_t>(w) + 1);
  std::vector<Boundary> hull_z(static_cast<size_t>(w) + 2);
  std::vector<int64_t> offs(static_cast<size_t>(w));

  for (int v = 0; v < h; ++v) {
    const size_t row_base = static_cast<size_t>(v) * w;
    int k = -1;
    for (int q = 0; q < w; ++q) {
      const int site_row = nearest_row[row_base + q];
      if (site_row < 0) continue;
      const int64_t dy = v - site_row;
      // C(q) + M^2*q^2, the constant used in crossing computations.
      const int64_t c = kM2 * (dy * dy + static_cast<int64_t>(q) * q) +
                        kM * site_row + q;
      offs[static_cast<size_t>(q)] = c;
      if (k < 0) {
        k = 0;
        hull_pos[0] = q;
        hull_z[0] = {-1, 0};
        hull_z[1] = {1, 0};
        continue;
      }
      Boundary s{};
      for (;;) {
        const int p = hull_pos[static_cast<size_t>(k)];
        s.num = c - offs[static_cast<size_t>(p)];
        s.den = 2 * kM2 * static_cast<int64_t>(q - p);
        if (k > 0 && boundary_le(s, hull_z[static_cast<size_t>(k)])) {
          --k;
          continue;
        }
        break;
      }
      ++k;
      hull_pos[static_cast<size_t>(k)] = q;
      hull_z[static_cast<size_t>(k)] = s;
      hull_z[static_cast<size_t>(k) + 1] = {1, 0};
    }

    int j = 0;
    for (int x = 0; x < w; ++x) {
      while (boundary_lt_int(hull_z[static_cast<size_t>(j) + 1], x)) ++j;
      const int q = hull_pos[static_cast<size_t>(j)];
      const int site_row = nearest_row[row_base + q];
      labels[row_base + x] = static_cast<int32_t>(site_row) * w + q;
    }
  }
  return labels;
}

DenseDepth densify_nearest(const DepthMap& sparse) {
  const std::vector<int32_t> labels = densify_labels(sparse);
  std::vector<double> depth(labels.size());
  const std::vector<double>& src = sparse.depth_data();
  for (size_t i = 0; i < labels.size(); ++i) {
    depth[i] = src[static_cast<size_t>(labels[i])];
  }
  return DenseDepth(sparse.width(), sparse.height(), std::move(depth));
}

ImageSigned encode_for_generator(const DenseDepth& dense, double max_range) {
  if (!(max_range > 0.0)) throw std::invalid_argument("encode: max_range must be positive");
  std::vector<double> out(dense.depth_data().size());
  for (size_t i = 0; i < out.size(); ++i) {
    const double d = std::min(dense.depth_data()[i], max_range);
    out[i] = 2.0 * d / max_range - 1.0;
  }
  return ImageSigned(dense.width(), dense.height(), 1, std::move(out));
}

}  // namespace dv
