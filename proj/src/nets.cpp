#include "dv/nets.hpp"

#include <stdexcept>
#include <string>

namespace dv::nn {

namespace {

constexpr double kLeakySlope = 0.2;
constexpr double kInitStd = 0.02;

Tensor4 zero_bias(int channels) { return Tensor4(1, channels, 1, 1); }

int encoder_width(const GeneratorConfig& cfg, int level) {
  return cfg.base_width << level;  // level 0 -> base
}

}  // namespace

Tensor4 init_weight(int d0, int d1, int k, Rng& rng) {
  Tensor4 w(d0, d1, k, k);
  for (double& v : w.data) v = rng.truncated_normal(kInitStd);
  return w;
}

// ---------------------------------------------------------------------------
// Generator

GeneratorNet::GeneratorNet(const GeneratorConfig& cfg, Rng& rng) : cfg_(cfg) {
  if (cfg.levels < 1) throw std::invalid_argument("GeneratorNet: levels must be >= 1");
  // encoder: conv k4s2p1, widths base, 2*base, ...
  int in_ch = cfg.in_channels;
  for (int i = 0; i < cfg.levels; ++i) {
    const int out_ch = encoder_width(cfg, i);
    enc_w_.emplace_back(init_weight(out_ch, in_ch, 4, rng));
    enc_b_.emplace_back(zero_bias(out_ch));
    in_ch = out_ch;
  }
  // decoder: tconv k4s2p1 from deepest to the full-resolution output conv.
  // dec index i (1..levels-1) mirrors encoder stage i; index 0 emits RGB.
  dec_w_.resize(static_cast<size_t>(cfg.levels));
  dec_b_.resize(static_cast<size_t>(cfg.levels));
  for (int i = cfg.levels - 1; i >= 1; --i) {
    const int in_c = (i == cfg.levels - 1) ? encoder_width(cfg, i) : 2 * encoder_width(cfg, i);
    const int out_c = encoder_width(cfg, i - 1);
    dec_w_[static_cast<size_t>(i)] = Param(init_weight(in_c, out_c, 4, rng));
    dec_b_[static_cast<size_t>(i)] = Param(zero_bias(out_c));
  }
  const int final_in = cfg.levels == 1 ? encoder_width(cfg, 0) : 2 * encoder_width(cfg, 0);
  dec_w_[0] = Param(init_weight(final_in, cfg.out_channels, 4, rng));
  dec_b_[0] = Param(zero_bias(cfg.out_channels));

  enc_in_.resize(enc_w_.size());
  enc_pre_.resize(enc_w_.size());
  dec_in_.resize(dec_w_.size());
  dec_pre_.resize(dec_w_.size());
}

Tensor4 GeneratorNet::forward(const Tensor4& x) {
  const int div = 1 << cfg_.levels;
  if (x.h % div != 0 || x.w % div != 0) {
    throw std::invalid_argument("GeneratorNet: spatial size " + x.shape_str() +
                                " not divisible by " + std::to_string(div));
  }
  if (x.c != cfg_.in_channels) {
    throw std::invalid_argument("GeneratorNet: expected " + std::to_string(cfg_.in_channels) +
                                " input channels, got " + x.shape_str());
  }
  std::vector<Tensor4> skips(enc_w_.size());
  Tensor4 cur = x;
  for (size_t i = 0; i < enc_w_.size(); ++i) {
    enc_in_[i] = cur;
    enc_pre_[i] = conv2d_forward(cur, enc_w_[i].value, enc_b_[i].value, 2, 1);
    cur = leaky_relu_forward(enc_pre_[i], kLeakySlope);
    skips[i] = cur;
  }
  for (int i = cfg_.levels - 1; i >= 1; --i) {
    const size_t si = static_cast<size_t>(i);
    dec_in_[si] = cur;
    dec_pre_[si] = tconv2d_forward(cur, dec_w_[si].value, dec_b_[si].value, 2, 1);
    cur = relu_forward(dec_pre_[si]);
    cur = concat_forward(cur, skips[static_cast<size_t>(i - 1)]);
  }
  dec_in_[0] = cur;
  dec_pre_[0] = tconv2d_forward(cur, dec_w_[0].value, dec_b_[0].value, 2, 1);
  out_tanh_ = tanh_forward(dec_pre_[0]);
  return out_tanh_;
}

void GeneratorNet::backward(const Tensor4& gy) {
  Tensor4 g = tanh_backward(out_tanh_, gy);
  Tensor4 gcur;
  tconv2d_backward(dec_in_[0], dec_w_[0].value, 2, 1, g, &gcur, &dec_w_[0].grad, &dec_b_[0].grad);
  // Encoder activation grads accumulate from the skip branch and, later,
  // from the downstream encoder stage.
  std::vector<Tensor4> skip_grads(enc_w_.size());
  for (int i = 1; i <= cfg_.levels - 1; ++i) {
    const size_t si = static_cast<size_t>(i);
    // gcur is grad w.r.t. concat(relu(tconv_i), skip_{i-1})
    const int dec_ch = dec_pre_[si].c;
    Tensor4 g_dec, g_skip;
    concat_backward(gcur, dec_ch, &g_dec, &g_skip);
    skip_grads[static_cast<size_t>(i - 1)] = std::move(g_skip);
    Tensor4 g_pre = relu_backward(dec_pre_[si], g_dec);
    tconv2d_backward(dec_in_[si], dec_w_[si].value, 2, 1, g_pre, &gcur, &dec_w_[si].grad,
                     &dec_b_[si].grad);
    if (i == cfg_.levels - 1) break;
  }
  // gcur now holds the grad w.r.t. the bottleneck activation (skips[L-1]).
  for (int i = cfg_.levels - 1; i >= 0; --i) {
    const size_t si = static_cast<size_t>(i);
    Tensor4 g_act = std::move(gcur);
    if (i < cfg_.levels - 1 && skip_grads[si].size() > 0) {
      g_act = add(g_act, skip_grads[si]);
    }
    Tensor4 g_pre = leaky_relu_backward(enc_pre_[si], kLeakySlope, g_act);
    conv2d_backward(enc_in_[si], enc_w_[si].value, 2, 1, g_pre, i > 0 ? &gcur : nullptr,
                    &enc_w_[si].grad, &enc_b_[si].grad);
  }
}

std::vector<Param*> GeneratorNet::params() {
  std::vector<Param*> out;
  for (size_t i = 0; i < enc_w_.size(); ++i) {
    out.push_back(&enc_w_[i]);
    out.push_back(&enc_b_[i]);
  }
  for (size_t i = 0; i < dec_w_.size(); ++i) {
    out.push_back(&dec_w_[i]);
    out.push_back(&dec_b_[i]);
  }
  return out;
}

void GeneratorNet::zero_grad() {
  for (Param* p : params()) p->zero_grad();
}

// ---------------------------------------------------------------------------
// Discriminator

DiscriminatorNet::DiscriminatorNet(const DiscriminatorConfig& cfg, Rng& rng) : cfg_(cfg) {
  if (cfg.n_down < 1) throw std::invalid_argument("DiscriminatorNet: n_down must be >= 1");
  int in_ch = cfg.in_channels;
  for (int i = 0; i < cfg.n_down; ++i) {
    const int out_ch = cfg.base_width << i;
    w_.emplace_back(init_weight(out_ch, in_ch, 4, rng));
    b_.emplace_back(zero_bias(out_ch));
    strides_.push_back(2);
    in_ch = out_ch;
  }
  w_.emplace_back(init_weight(1, in_ch, 4, rng));
  b_.emplace_back(zero_bias(1));
  strides_.push_back(1);
  in_.resize(w_.size());
  pre_.resize(w_.size());
}

Tensor4 DiscriminatorNet::forward(const Tensor4& x) {
  if (x.c != cfg_.in_channels) {
    throw std::invalid_argument("DiscriminatorNet: expected " +
                                std::to_string(cfg_.in_channels) + " channels, got " +
                                x.shape_str());
  }
  Tensor4 cur = x;
  for (size_t i = 0; i < w_.size(); ++i) {
    in_[i] = cur;
    pre_[i] = conv2d_forward(cur, w_[i].value, b_[i].value, strides_[i], 1);
    cur = i + 1 < w_.size() ? leaky_relu_forward(pre_[i], kLeakySlope) : pre_[i];
  }
  return cur;  // logit grid, no activation on the last layer
}

Tensor4 DiscriminatorNet::backward(const Tensor4& gy, bool accumulate_params, bool want_gx) {
  Tensor4 g = gy;
  for (int i = static_cast<int>(w_.size()) - 1; i >= 0; --i) {
    const size_t si = static_cast<size_t>(i);
    if (si + 1 < w_.size()) {
      g = leaky_relu_backward(pre_[si], kLeakySlope, g);
    }
    const bool need_gx = i > 0 || want_gx;
    Tensor4 gx;
    conv2d_backward(in_[si], w_[si].value, strides_[si], 1, g, need_gx ? &gx : nullptr,
                    accumulate_params ? &w_[si].grad : nullptr,
                    accumulate_params ? &b_[si].grad : nullptr);
    g = std::move(gx);
  }
  return g;
}

int DiscriminatorNet::logit_size(int input_size) const {
  int s = input_size;
  for (int stride : strides_) s = (s + 2 - 4) / stride + 1;
  return s;
}

int DiscriminatorNet::receptive_field() const {
  int rf = 1;
  int jump = 1;
  for (int stride : strides_) {
    rf += 3 * jump;
    jump *= stride;
  }
  return rf;
}

std::vector<Param*> DiscriminatorNet::params() {
  std::vector<Param*> out;
  for (size_t i = 0; i < w_.size(); ++i) {
    out.push_back(&w_[i]);
    out.push_back(&b_[i]);
  }
  return out;
}

void DiscriminatorNet::zero_grad() {
  for (Param* p : params()) p->zero_grad();
}

// ---------------------------------------------------------------------------
// Refiner

RefinerNet::RefinerNet(const RefinerConfig& cfg, Rng& rng) : cfg_(cfg) {
  if (cfg.iterations < 0) throw std::invalid_argument("RefinerNet: iterations must be >= 0");
  const int h = cfg.hidden_width;
  w1_ = Param(init_weight(h, 4, 3, rng));
  b1_ = Param(zero_bias(h));
  w2_ = Param(init_weight(h, h, 3, rng));
  b2_ = Param(zero_bias(h));
  w3_ = Param(init_weight(3, h, 3, rng));
  b3_ = Param(zero_bias(3));
}

Tensor4 RefinerNet::refine(const Tensor4& rgb_est, const Tensor4& depth, int iterations) {
  if (rgb_est.c != 3) {
    throw std::invalid_argument("refine: rgb estimate must have 3 channels, got " +
                                rgb_est.shape_str());
  }
  if (depth.n != rgb_est.n || depth.h != rgb_est.h || depth.w != rgb_est.w) {
    throw std::invalid_argument("refine: depth " + depth.shape_str() + " does not match rgb " +
                                rgb_est.shape_str());
  }
  const int iters = iterations < 0 ? cfg_.iterations : iterations;
  cached_depth_channels_ = depth.c;
  iters_.clear();
  Tensor4 x = rgb_est;
  for (int it = 0; it < iters; ++it) {
    IterCache cache;
    cache.input = concat_forward(x, depth);
    cache.pre1 = conv2d_forward(cache.input, w1_.value, b1_.value, 1, 1);
    Tensor4 a1 = relu_forward(cache.pre1);
    cache.pre2 = conv2d_forward(a1, w2_.value, b2_.value, 1, 1);
    Tensor4 a2 = relu_forward(cache.pre2);
    Tensor4 pre3 = conv2d_forward(a2, w3_.value, b3_.value, 1, 1);
    cache.res = tanh_forward(pre3);
    cache.sum = add(x, cache.res);
    x = clamp_forward(cache.sum, -1.0, 1.0);
    iters_.push_back(std::move(cache));
  }
  return x;
}

Tensor4 RefinerNet::backward(const Tensor4& gy) {
  Tensor4 gx = gy;
  for (int it = static_cast<int>(iters_.size()) - 1; it >= 0; --it) {
    IterCache& cache = iters_[static_cast<size_t>(it)];
    Tensor4 g_sum = clamp_backward(cache.sum, -1.0, 1.0, gx);
    // d(sum) splits into the residual branch and the passthrough to x.
    Tensor4 g_res = tanh_backward(cache.res, g_sum);
    Tensor4 a2 = relu_forward(cache.pre2);
    Tensor4 g_a2;
    conv2d_backward(a2, w3_.value, 1, 1, g_res, &g_a2, &w3_.grad, &b3_.grad);
    Tensor4 g_pre2 = relu_backward(cache.pre2, g_a2);
    Tensor4 a1 = relu_forward(cache.pre1);
    Tensor4 g_a1;
    conv2d_backward(a1, w2_.value, 1, 1, g_pre2, &g_a1, &w2_.grad, &b2_.grad);
    Tensor4 g_pre1 = relu_backward(cache.pre1, g_a1);
    Tensor4 g_input;
    conv2d_backward(cache.input, w1_.value, 1, 1, g_pre1, &g_input, &w1_.grad, &b1_.grad);
    Tensor4 g_x_branch;
    concat_backward(g_input, 3, &g_x_branch, nullptr);
    gx = add(g_sum, g_x_branch);
  }
  return gx;
}

std::vector<Param*> RefinerNet::params() { return {&w1_, &b1_, &w2_, &b2_, &w3_, &b3_}; }

void RefinerNet::zero_grad() {
  for (Param* p : params()) p->zero_grad();
}

}  // namespace dv::nn
