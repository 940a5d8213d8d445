#include "dv/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace dv::nn {

Adam::Adam(std::vector<Param*> params, const AdamConfig& cfg)
    : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Param* p : params_) {
    m_.push_back(Tensor4::zeros_like(p->value));
    v_.push_back(Tensor4::zeros_like(p->value));
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Param& p = *params_[i];
    if (!p.grad.same_shape(p.value)) {
      throw std::invalid_argument("adam_step: grad shape " + p.grad.shape_str() +
                                  " != param shape " + p.value.shape_str());
    }
    Tensor4& m = m_[i];
    Tensor4& v = v_[i];
    for (size_t j = 0; j < p.value.data.size(); ++j) {
      const double g = p.grad.data[j];
      m.data[j] = cfg_.beta1 * m.data[j] + (1.0 - cfg_.beta1) * g;
      v.data[j] = cfg_.beta2 * v.data[j] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m.data[j] / bc1;
      const double vhat = v.data[j] / bc2;
      p.value.data[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

void Adam::zero_grad() {
  for (Param* p : params_) p->zero_grad();
}

}  // namespace dv::nn
