#pragma once

#include <vector>

#include "dv/rng.hpp"
#include "dv/tensor.hpp"

namespace dv::nn {

// U-Net-style generator: stride-2 encoder convs with LeakyReLU, stride-2
// decoder tconvs with ReLU, skip concats from mirror stages, final tanh.
// Input (N, in_channels, H, W) with H, W divisible by 2^levels.
struct GeneratorConfig {
  int in_channels = 1;
  int out_channels = 3;
  int base_width = 8;
  int levels = 3;

  bool operator==(const GeneratorConfig&) const = default;
};

class GeneratorNet {
 public:
  GeneratorNet(const GeneratorConfig& cfg, Rng& rng);

  Tensor4 forward(const Tensor4& x);
  // Backward through the cached forward; accumulates parameter grads.
  void backward(const Tensor4& gy);

  std::vector<Param*> params();
  void zero_grad();
  const GeneratorConfig& config() const { return cfg_; }

 private:
  GeneratorConfig cfg_;
  std::vector<Param> enc_w_, enc_b_;
  std::vector<Param> dec_w_, dec_b_;  // dec_w_[0] is the final full-res tconv
  // forward caches
  std::vector<Tensor4> enc_in_, enc_pre_;
  std::vector<Tensor4> dec_in_, dec_pre_;
  Tensor4 out_tanh_;
};

// PatchGAN discriminator on concat(depth, rgb): n_down stride-2 convs with
// doubling widths, then one stride-1 conv to a single-channel logit grid.
// All kernels 4x4 with zero padding 1.
struct DiscriminatorConfig {
  int in_channels = 4;
  int base_width = 8;
  int n_down = 2;

  bool operator==(const DiscriminatorConfig&) const = default;
};

class DiscriminatorNet {
 public:
  DiscriminatorNet(const DiscriminatorConfig& cfg, Rng& rng);

  Tensor4 forward(const Tensor4& x);
  // accumulate_params=false leaves parameter grads untouched (generator step).
  // Returns grad w.r.t. the input when want_gx is true.
  Tensor4 backward(const Tensor4& gy, bool accumulate_params, bool want_gx);

  // Logit grid edge length for a square input, from the layer arithmetic.
  int logit_size(int input_size) const;
  // Receptive field of one logit (the effective patch size).
  int receptive_field() const;

  std::vector<Param*> params();
  void zero_grad();
  const DiscriminatorConfig& config() const { return cfg_; }

 private:
  DiscriminatorConfig cfg_;
  std::vector<Param> w_, b_;
  std::vector<int> strides_;
  std::vector<Tensor4> in_, pre_;
};

// Residual refiner: three 3x3 convs (ReLU between, tanh at the end) on
// concat(rgb_estimate, depth); the bounded residual is added to the estimate
// and the sum clamped back to [-1, 1] each iteration.
struct RefinerConfig {
  int hidden_width = 8;
  int iterations = 3;

  bool operator==(const RefinerConfig&) const = default;
};

class RefinerNet {
 public:
  RefinerNet(const RefinerConfig& cfg, Rng& rng);

  // Runs `iterations` refinement passes (cfg.iterations when < 0).
  Tensor4 refine(const Tensor4& rgb_est, const Tensor4& depth, int iterations = -1);
  // Backward through all cached iterations; returns grad w.r.t. rgb_est.
  Tensor4 backward(const Tensor4& gy);

  std::vector<Param*> params();
  void zero_grad();
  const RefinerConfig& config() const { return cfg_; }

 private:
  RefinerConfig cfg_;
  Param w1_, b1_, w2_, b2_, w3_, b3_;
  struct IterCache {
    Tensor4 input;  // concat(x, depth)
    Tensor4 pre1, pre2, res;
    Tensor4 sum;  // x + residual, before clamp
  };
  std::vector<IterCache> iters_;
  int cached_depth_channels_ = 0;
};

// Truncated-normal(0.02) weights, zero biases; the shared init used by all
// three networks.
Tensor4 init_weight(int d0, int d1, int k, Rng& rng);

}  // namespace dv::nn
