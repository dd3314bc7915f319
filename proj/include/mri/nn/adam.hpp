#pragma once

#include <cmath>
#include <vector>

#include "mri/nn/tensor.hpp"

namespace mri::nn {

// Bias-corrected Adam over a fixed parameter set. step() consumes and zeroes
// the accumulated gradients.
class Adam {
 public:
  explicit Adam(std::vector<TensorPtr> params, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8)
      : params_(std::move(params)), lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {
    lr_scale_.assign(params_.size(), 1.0);
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const auto& p : params_) {
      m_.emplace_back(p->value.size(), 0.0);
      v_.emplace_back(p->value.size(), 0.0);
    }
  }

  // per-parameter learning-rate multipliers, aligned with the params vector
  void set_lr_scales(std::vector<double> scales) {
    if (scales.size() != params_.size())
      throw shape_error("Adam: lr scale count mismatch");
    lr_scale_ = std::move(scales);
  }

  void step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (size_t i = 0; i < params_.size(); ++i) {
      Tensor& p = *params_[i];
      const double lr = lr_ * lr_scale_[i];
      for (size_t j = 0; j < p.value.size(); ++j) {
        const double g = p.grad[j];
        m_[i][j] = b1_ * m_[i][j] + (1.0 - b1_) * g;
        v_[i][j] = b2_ * v_[i][j] + (1.0 - b2_) * g * g;
        const double mhat = m_[i][j] / bc1;
        const double vhat = v_[i][j] / bc2;
        p.value[j] -= lr * mhat / (std::sqrt(vhat) + eps_);
      }
      p.zero_grad();
    }
  }

  long steps_done() const { return t_; }

 private:
  std::vector<TensorPtr> params_;
  std::vector<double> lr_scale_;
  std::vector<std::vector<double>> m_, v_;
  double lr_, b1_, b2_, eps_;
  long t_ = 0;
};

}  // namespace mri::nn
