#pragma once

#include <cstdint>
#include <vector>

#include "dv/tensor.hpp"

namespace dv::nn {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

// Adam with bias correction over a fixed parameter list. Moment buffers are
// exposed so weight files can round-trip the optimizer state bit-exactly.
class Adam {
 public:
  Adam(std::vector<Param*> params, const AdamConfig& cfg);

  // One update from the accumulated grads. Throws on shape mismatch.
  void step();
  void zero_grad();

  int64_t t() const { return t_; }
  void set_t(int64_t t) { t_ = t; }
  const AdamConfig& config() const { return cfg_; }
  const std::vector<Param*>& params() const { return params_; }
  std::vector<Tensor4>& moment1() { return m_; }
  std::vector<Tensor4>& moment2() { return v_; }

 private:
  std::vector<Param*> params_;
  AdamConfig cfg_;
  std::vector<Tensor4> m_, v_;
  int64_t t_ = 0;
};

}  // namespace dv::nn
