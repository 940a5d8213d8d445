#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dv::nn {

// Dense NCHW tensor of doubles. Gradients live in separate Tensor4 buffers
// owned by whoever needs them (Param, layer caches); the tensor itself is
// plain data.
struct Tensor4 {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<double> data;

  Tensor4() = default;
  Tensor4(int n_, int c_, int h_, int w_);

  size_t size() const { return static_cast<size_t>(n) * c * h * w; }
  bool same_shape(const Tensor4& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }
  std::string shape_str() const;

  double& at(int in, int ic, int iy, int ix) {
    return data[((static_cast<size_t>(in) * c + ic) * h + iy) * w + ix];
  }
  double at(int in, int ic, int iy, int ix) const {
    return data[((static_cast<size_t>(in) * c + ic) * h + iy) * w + ix];
  }

  void fill(double v);
  static Tensor4 zeros_like(const Tensor4& t) { return Tensor4(t.n, t.c, t.h, t.w); }
};

// Trainable parameter: value plus accumulated gradient of the same shape.
struct Param {
  Tensor4 value;
  Tensor4 grad;

  explicit Param(Tensor4 v) : value(std::move(v)), grad(Tensor4::zeros_like(value)) {}
  Param() = default;
  void zero_grad() { grad.fill(0.0); }
};

// ---- convolution ----------------------------------------------------------
// weight layout (out_ch, in_ch, k, k); bias (1, out_ch, 1, 1).
// out = floor((in + 2*pad - k)/stride) + 1.
Tensor4 conv2d_forward(const Tensor4& x, const Tensor4& weight, const Tensor4& bias, int stride,
                       int pad);
// Accumulates into gw/gb; writes gx (when non-null) from scratch.
void conv2d_backward(const Tensor4& x, const Tensor4& weight, int stride, int pad,
                     const Tensor4& gy, Tensor4* gx, Tensor4* gw, Tensor4* gb);

// ---- transposed convolution ------------------------------------------------
// weight layout (in_ch, out_ch, k, k); out = (in - 1)*stride - 2*pad + k.
Tensor4 tconv2d_forward(const Tensor4& x, const Tensor4& weight, const Tensor4& bias, int stride,
                        int pad);
void tconv2d_backward(const Tensor4& x, const Tensor4& weight, int stride, int pad,
                      const Tensor4& gy, Tensor4* gx, Tensor4* gw, Tensor4* gb);

// ---- pointwise -------------------------------------------------------------
Tensor4 relu_forward(const Tensor4& x);
Tensor4 relu_backward(const Tensor4& x, const Tensor4& gy);
Tensor4 leaky_relu_forward(const Tensor4& x, double slope);
Tensor4 leaky_relu_backward(const Tensor4& x, double slope, const Tensor4& gy);
Tensor4 tanh_forward(const Tensor4& x);
// Takes the forward *output*: d/dx tanh = 1 - y^2.
Tensor4 tanh_backward(const Tensor4& y, const Tensor4& gy);
Tensor4 clamp_forward(const Tensor4& x, double lo, double hi);
// Pass-through where lo <= x <= hi, zero outside.
Tensor4 clamp_backward(const Tensor4& x, double lo, double hi, const Tensor4& gy);
Tensor4 add(const Tensor4& a, const Tensor4& b);

// ---- channel concat --------------------------------------------------------
Tensor4 concat_forward(const Tensor4& a, const Tensor4& b);
void concat_backward(const Tensor4& gy, int ca, Tensor4* ga, Tensor4* gb);

// ---- losses ----------------------------------------------------------------
struct LossGrad {
  double loss = 0.0;
  Tensor4 grad;
};

// Numerically stable binary cross-entropy with logits against a constant
// label broadcast over the whole tensor; grad is d(loss)/d(logits).
LossGrad bce_with_logits(const Tensor4& logits, double label);

// Mean absolute error; grad is d/d(pred). sign(0) taken as 0.
LossGrad l1_loss(const Tensor4& pred, const Tensor4& target);

double mean(const Tensor4& t);

}  // namespace dv::nn
