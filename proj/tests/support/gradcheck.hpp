#pragma once

// Central finite-difference gradient checking against the microkernel's
// analytic backward passes.

#include <algorithm>
#include <cmath>
#include <functional>

#include "dv/rng.hpp"
#include "dv/tensor.hpp"

namespace gradcheck {

using dv::nn::Tensor4;

inline Tensor4 random_tensor(dv::Rng& rng, int n, int c, int h, int w, double scale = 1.0) {
  Tensor4 t(n, c, h, w);
  for (double& v : t.data) v = scale * (2.0 * rng.uniform() - 1.0);
  return t;
}

inline double dot(const Tensor4& a, const Tensor4& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

// Worst relative error between the analytic gradient tensor and central
// differences of loss() = dot(r, forward()), perturbing each element of
// `subject` in place. Elements for which `skip` returns true (FD unreliable
// near kinks) are left out.
inline double max_rel_err(Tensor4& subject, const Tensor4& analytic,
                          const std::function<double()>& loss,
                          const std::function<bool(double)>& skip = nullptr,
                          double step = 1e-5) {
  double worst = 0.0;
  for (size_t i = 0; i < subject.data.size(); ++i) {
    const double orig = subject.data[i];
    if (skip && skip(orig)) continue;
    subject.data[i] = orig + step;
    const double lp = loss();
    subject.data[i] = orig - step;
    const double lm = loss();
    subject.data[i] = orig;
    const double numeric = (lp - lm) / (2.0 * step);
    const double a = analytic.data[i];
    const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-3});
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace gradcheck
