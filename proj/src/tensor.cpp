#include "dv/tensor.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dv::nn {

namespace {

using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatrixRM>;
using ConstMapRM = Eigen::Map<const MatrixRM>;

[[noreturn]] void shape_error(const std::string& op, const std::string& got,
                              const std::string& expected) {
  throw std::invalid_argument(op + ": shape mismatch, got " + got + ", expected " + expected);
}

void check_shape(const char* op, const Tensor4& t, const Tensor4& ref) {
  if (!t.same_shape(ref)) shape_error(op, t.shape_str(), ref.shape_str());
}

// Gathers K*K patches around each position of an NCHW plane set into a
// (channels*K*K) x (posH*posW) row-major matrix; out-of-bounds reads are 0.
// Position (py,px) reads source pixel (py*stride + ky - pad, px*stride + kx - pad).
void im2col(const double* src, int channels, int big_h, int big_w, int k, int stride, int pad,
            int pos_h, int pos_w, double* col) {
  const size_t pos_count = static_cast<size_t>(pos_h) * pos_w;
  size_t r = 0;
  for (int ci = 0; ci < channels; ++ci) {
    const double* plane = src + static_cast<size_t>(ci) * big_h * big_w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++r) {
        double* out_row = col + r * pos_count;
        for (int py = 0; py < pos_h; ++py) {
          const int sy = py * stride + ky - pad;
          double* out = out_row + static_cast<size_t>(py) * pos_w;
          if (sy < 0 || sy >= big_h) {
            std::fill(out, out + pos_w, 0.0);
            continue;
          }
          const double* in_row = plane + static_cast<size_t>(sy) * big_w;
          for (int px = 0; px < pos_w; ++px) {
            const int sx = px * stride + kx - pad;
            out[px] = (sx >= 0 && sx < big_w) ? in_row[sx] : 0.0;
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-adds the column matrix back onto the planes.
void col2im(const double* col, int channels, int big_h, int big_w, int k, int stride, int pad,
            int pos_h, int pos_w, double* dst) {
  const size_t pos_count = static_cast<size_t>(pos_h) * pos_w;
  size_t r = 0;
  for (int ci = 0; ci < channels; ++ci) {
    double* plane = dst + static_cast<size_t>(ci) * big_h * big_w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++r) {
        const double* in_row = col + r * pos_count;
        for (int py = 0; py < pos_h; ++py) {
          const int sy = py * stride + ky - pad;
          if (sy < 0 || sy >= big_h) continue;
          double* out_row = plane + static_cast<size_t>(sy) * big_w;
          const double* in = in_row + static_cast<size_t>(py) * pos_w;
          for (int px = 0; px < pos_w; ++px) {
            const int sx = px * stride + kx - pad;
            if (sx >= 0 && sx < big_w) out_row[sx] += in[px];
          }
        }
      }
    }
  }
}

std::vector<double>& scratch_col() {
  thread_local std::vector<double> buf;
  return buf;
}

void check_bias(const char* op, const Tensor4& bias, int out_ch) {
  if (bias.n != 1 || bias.c != out_ch || bias.h != 1 || bias.w != 1) {
    shape_error(op, bias.shape_str(),
                "(1," + std::to_string(out_ch) + ",1,1)");
  }
}

}  // namespace

Tensor4::Tensor4(int n_, int c_, int h_, int w_) : n(n_), c(c_), h(h_), w(w_) {
  if (n < 0 || c < 0 || h < 0 || w < 0) throw std::invalid_argument("Tensor4: negative dim");
  data.assign(size(), 0.0);
}

std::string Tensor4::shape_str() const {
  return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
         std::to_string(w) + ")";
}

void Tensor4::fill(double v) { std::fill(data.begin(), data.end(), v); }

Tensor4 conv2d_forward(const Tensor4& x, const Tensor4& weight, const Tensor4& bias, int stride,
                       int pad) {
  const int k = weight.h;
  if (weight.w != k) throw std::invalid_argument("conv2d: non-square kernel");
  if (weight.c != x.c) {
    shape_error("conv2d", x.shape_str(), "input channels = " + std::to_string(weight.c));
  }
  check_bias("conv2d", bias, weight.n);
  const int oh = (x.h + 2 * pad - k) / stride + 1;
  const int ow = (x.w + 2 * pad - k) / stride + 1;
  if (oh <= 0 || ow <= 0) {
    throw std::invalid_argument("conv2d: kernel larger than padded input " + x.shape_str());
  }
  Tensor4 y(x.n, weight.n, oh, ow);
  const size_t patch = static_cast<size_t>(x.c) * k * k;
  const size_t pos = static_cast<size_t>(oh) * ow;
  std::vector<double>& col = scratch_col();
  col.resize(patch * pos);
  ConstMapRM wmat(weight.data.data(), weight.n, static_cast<Eigen::Index>(patch));
  for (int in = 0; in < x.n; ++in) {
    im2col(x.data.data() + static_cast<size_t>(in) * x.c * x.h * x.w, x.c, x.h, x.w, k, stride,
           pad, oh, ow, col.data());
    ConstMapRM cmat(col.data(), static_cast<Eigen::Index>(patch), static_cast<Eigen::Index>(pos));
    MapRM ymat(y.data.data() + static_cast<size_t>(in) * y.c * pos, y.c,
               static_cast<Eigen::Index>(pos));
    ymat.noalias() = wmat * cmat;
    for (int co = 0; co < y.c; ++co) ymat.row(co).array() += bias.data[static_cast<size_t>(co)];
  }
  return y;
}

void conv2d_backward(const Tensor4& x, const Tensor4& weight, int stride, int pad,
                     const Tensor4& gy, Tensor4* gx, Tensor4* gw, Tensor4* gb) {
  const int k = weight.h;
  const int oh = (x.h + 2 * pad - k) / stride + 1;
  const int ow = (x.w + 2 * pad - k) / stride + 1;
  if (gy.n != x.n || gy.c != weight.n || gy.h != oh || gy.w != ow) {
    shape_error("conv2d_backward", gy.shape_str(),
                Tensor4(x.n, weight.n, oh, ow).shape_str());
  }
  const size_t patch = static_cast<size_t>(x.c) * k * k;
  const size_t pos = static_cast<size_t>(oh) * ow;
  std::vector<double>& col = scratch_col();
  col.resize(patch * pos);
  std::vector<double> gcol;
  if (gx) {
    gcol.resize(patch * pos);
    *gx = Tensor4::zeros_like(x);
  }
  ConstMapRM wmat(weight.data.data(), weight.n, static_cast<Eigen::Index>(patch));
  for (int in = 0; in < x.n; ++in) {
    ConstMapRM gymat(gy.data.data() + static_cast<size_t>(in) * gy.c * pos, gy.c,
                     static_cast<Eigen::Index>(pos));
    if (gw) {
      im2col(x.data.data() + static_cast<size_t>(in) * x.c * x.h * x.w, x.c, x.h, x.w, k, stride,
             pad, oh, ow, col.data());
      ConstMapRM cmat(col.data(), static_cast<Eigen::Index>(patch),
                      static_cast<Eigen::Index>(pos));
      MapRM gwmat(gw->data.data(), weight.n, static_cast<Eigen::Index>(patch));
      gwmat.noalias() += gymat * cmat.transpose();
    }
    if (gb) {
      for (int co = 0; co < gy.c; ++co) {
        gb->data[static_cast<size_t>(co)] += gymat.row(co).sum();
      }
    }
    if (gx) {
      MapRM gcmat(gcol.data(), static_cast<Eigen::Index>(patch), static_cast<Eigen::Index>(pos));
      gcmat.noalias() = wmat.transpose() * gymat;
      col2im(gcol.data(), x.c, x.h, x.w, k, stride, pad, oh, ow,
             gx->data.data() + static_cast<size_t>(in) * x.c * x.h * x.w);
    }
  }
}

Tensor4 tconv2d_forward(const Tensor4& x, const Tensor4& weight, const Tensor4& bias, int stride,
                        int pad) {
  const int k = weight.h;
  if (weight.w != k) throw std::invalid_argument("tconv2d: non-square kernel");
  if (weight.n != x.c) {
    shape_error("tconv2d", x.shape_str(), "input channels = " + std::to_string(weight.n));
  }
  const int co = weight.c;
  check_bias("tconv2d", bias, co);
  const int oh = (x.h - 1) * stride - 2 * pad + k;
  const int ow = (x.w - 1) * stride - 2 * pad + k;
  if (oh <= 0 || ow <= 0) throw std::invalid_argument("tconv2d: empty output " + x.shape_str());
  Tensor4 y(x.n, co, oh, ow);
  const size_t patch = static_cast<size_t>(co) * k * k;
  const size_t pos = static_cast<size_t>(x.h) * x.w;
  std::vector<double>& col = scratch_col();
  col.resize(patch * pos);
  // weight (ci, co*k*k) times x (ci, pos) -> col (co*k*k, pos)
  ConstMapRM wmat(weight.data.data(), x.c, static_cast<Eigen::Index>(patch));
  for (int in = 0; in < x.n; ++in) {
    ConstMapRM xmat(x.data.data() + static_cast<size_t>(in) * x.c * pos, x.c,
                    static_cast<Eigen::Index>(pos));
    MapRM cmat(col.data(), static_cast<Eigen::Index>(patch), static_cast<Eigen::Index>(pos));
    cmat.noalias() = wmat.transpose() * xmat;
    double* out = y.data.data() + static_cast<size_t>(in) * y.c * oh * ow;
    col2im(col.data(), co, oh, ow, k, stride, pad, x.h, x.w, out);
  }
  for (int in = 0; in < y.n; ++in) {
    for (int c = 0; c < co; ++c) {
      double* plane = y.data.data() + (static_cast<size_t>(in) * co + c) * oh * ow;
      const double b = bias.data[static_cast<size_t>(c)];
      for (size_t i = 0; i < static_cast<size_t>(oh) * ow; ++i) plane[i] += b;
    }
  }
  return y;
}

void tconv2d_backward(const Tensor4& x, const Tensor4& weight, int stride, int pad,
                      const Tensor4& gy, Tensor4* gx, Tensor4* gw, Tensor4* gb) {
  const int k = weight.h;
  const int co = weight.c;
  const int oh = (x.h - 1) * stride - 2 * pad + k;
  const int ow = (x.w - 1) * stride - 2 * pad + k;
  if (gy.n != x.n || gy.c != co || gy.h != oh || gy.w != ow) {
    shape_error("tconv2d_backward", gy.shape_str(), Tensor4(x.n, co, oh, ow).shape_str());
  }
  const size_t patch = static_cast<size_t>(co) * k * k;
  const size_t pos = static_cast<size_t>(x.h) * x.w;
  std::vector<double>& col = scratch_col();
  col.resize(patch * pos);
  if (gx) *gx = Tensor4::zeros_like(x);
  ConstMapRM wmat(weight.data.data(), x.c, static_cast<Eigen::Index>(patch));
  for (int in = 0; in < x.n; ++in) {
    // Patches of gy seen from each input position.
    im2col(gy.data.data() + static_cast<size_t>(in) * co * oh * ow, co, oh, ow, k, stride, pad,
           x.h, x.w, col.data());
    ConstMapRM cmat(col.data(), static_cast<Eigen::Index>(patch), static_cast<Eigen::Index>(pos));
    if (gx) {
      MapRM gxmat(gx->data.data() + static_cast<size_t>(in) * x.c * pos, x.c,
                  static_cast<Eigen::Index>(pos));
      gxmat.noalias() = wmat * cmat;
    }
    if (gw) {
      ConstMapRM xmat(x.data.data() + static_cast<size_t>(in) * x.c * pos, x.c,
                      static_cast<Eigen::Index>(pos));
      MapRM gwmat(gw->data.data(), x.c, static_cast<Eigen::Index>(patch));
      gwmat.noalias() += xmat * cmat.transpose();
    }
  }
  if (gb) {
    for (int in = 0; in < gy.n; ++in) {
      for (int c = 0; c < co; ++c) {
        const double* plane = gy.data.data() + (static_cast<size_t>(in) * co + c) * oh * ow;
        double s = 0.0;
        for (size_t i = 0; i < static_cast<size_t>(oh) * ow; ++i) s += plane[i];
        gb->data[static_cast<size_t>(c)] += s;
      }
    }
  }
}

Tensor4 relu_forward(const Tensor4& x) {
  Tensor4 y = x;
  for (double& v : y.data) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor4 relu_backward(const Tensor4& x, const Tensor4& gy) {
  check_shape("relu_backward", gy, x);
  Tensor4 gx = Tensor4::zeros_like(x);
  for (size_t i = 0; i < x.data.size(); ++i) gx.data[i] = x.data[i] > 0.0 ? gy.data[i] : 0.0;
  return gx;
}

Tensor4 leaky_relu_forward(const Tensor4& x, double slope) {
  Tensor4 y = x;
  for (double& v : y.data) v = v > 0.0 ? v : slope * v;
  return y;
}

Tensor4 leaky_relu_backward(const Tensor4& x, double slope, const Tensor4& gy) {
  check_shape("leaky_relu_backward", gy, x);
  Tensor4 gx = Tensor4::zeros_like(x);
  for (size_t i = 0; i < x.data.size(); ++i) {
    gx.data[i] = x.data[i] > 0.0 ? gy.data[i] : slope * gy.data[i];
  }
  return gx;
}

Tensor4 tanh_forward(const Tensor4& x) {
  Tensor4 y = x;
  for (double& v : y.data) v = std::tanh(v);
  return y;
}

Tensor4 tanh_backward(const Tensor4& y, const Tensor4& gy) {
  check_shape("tanh_backward", gy, y);
  Tensor4 gx = Tensor4::zeros_like(y);
  for (size_t i = 0; i < y.data.size(); ++i) {
    gx.data[i] = (1.0 - y.data[i] * y.data[i]) * gy.data[i];
  }
  return gx;
}

Tensor4 clamp_forward(const Tensor4& x, double lo, double hi) {
  Tensor4 y = x;
  for (double& v : y.data) v = std::clamp(v, lo, hi);
  return y;
}

Tensor4 clamp_backward(const Tensor4& x, double lo, double hi, const Tensor4& gy) {
  check_shape("clamp_backward", gy, x);
  Tensor4 gx = Tensor4::zeros_like(x);
  for (size_t i = 0; i < x.data.size(); ++i) {
    gx.data[i] = (x.data[i] >= lo && x.data[i] <= hi) ? gy.data[i] : 0.0;
  }
  return gx;
}

Tensor4 add(const Tensor4& a, const Tensor4& b) {
  check_shape("add", b, a);
  Tensor4 y = a;
  for (size_t i = 0; i < y.data.size(); ++i) y.data[i] += b.data[i];
  return y;
}

Tensor4 concat_forward(const Tensor4& a, const Tensor4& b) {
  if (a.n != b.n || a.h != b.h || a.w != b.w) {
    shape_error("concat", b.shape_str(), a.shape_str() + " (all but channels)");
  }
  Tensor4 y(a.n, a.c + b.c, a.h, a.w);
  const size_t plane = static_cast<size_t>(a.h) * a.w;
  for (int in = 0; in < a.n; ++in) {
    double* dst = y.data.data() + static_cast<size_t>(in) * y.c * plane;
    const double* pa = a.data.data() + static_cast<size_t>(in) * a.c * plane;
    const double* pb = b.data.data() + static_cast<size_t>(in) * b.c * plane;
    std::copy(pa, pa + static_cast<size_t>(a.c) * plane, dst);
    std::copy(pb, pb + static_cast<size_t>(b.c) * plane, dst + static_cast<size_t>(a.c) * plane);
  }
  return y;
}

void concat_backward(const Tensor4& gy, int ca, Tensor4* ga, Tensor4* gb) {
  const int cb = gy.c - ca;
  if (cb < 0) throw std::invalid_argument("concat_backward: ca exceeds channels");
  const size_t plane = static_cast<size_t>(gy.h) * gy.w;
  if (ga) *ga = Tensor4(gy.n, ca, gy.h, gy.w);
  if (gb) *gb = Tensor4(gy.n, cb, gy.h, gy.w);
  for (int in = 0; in < gy.n; ++in) {
    const double* src = gy.data.data() + static_cast<size_t>(in) * gy.c * plane;
    if (ga) {
      std::copy(src, src + static_cast<size_t>(ca) * plane,
                ga->data.data() + static_cast<size_t>(in) * ca * plane);
    }
    if (gb) {
      std::copy(src + static_cast<size_t>(ca) * plane, src + static_cast<size_t>(gy.c) * plane,
                gb->data.data() + static_cast<size_t>(in) * cb * plane);
    }
  }
}

LossGrad bce_with_logits(const Tensor4& logits, double label) {
  LossGrad out;
  out.grad = Tensor4::zeros_like(logits);
  const double n = static_cast<double>(logits.data.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.data.size(); ++i) {
    const double z = logits.data[i];
    sum += std::max(z, 0.0) - z * label + std::log1p(std::exp(-std::abs(z)));
    const double sig = 1.0 / (1.0 + std::exp(-z));
    out.grad.data[i] = (sig - label) / n;
  }
  out.loss = sum / n;
  return out;
}

LossGrad l1_loss(const Tensor4& pred, const Tensor4& target) {
  check_shape("l1_loss", target, pred);
  LossGrad out;
  out.grad = Tensor4::zeros_like(pred);
  const double n = static_cast<double>(pred.data.size());
  double sum = 0.0;
  for (size_t i = 0; i < pred.data.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    sum += std::abs(d);
    out.grad.data[i] = d > 0.0 ? 1.0 / n : (d < 0.0 ? -1.0 / n : 0.0);
  }
  out.loss = sum / n;
  return out;
}

double mean(const Tensor4& t) {
  if (t.data.empty()) return 0.0;
  double s = 0.0;
  for (double v : t.data) s += v;
  return s / static_cast<double>(t.data.size());
}

}  // namespace dv::nn
