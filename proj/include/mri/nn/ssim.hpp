#pragma once

#include "mri/nn/ops.hpp"

namespace mri::nn {

// Uniform-window SSIM constants; c1 = (0.01 L)^2, c2 = (0.03 L)^2.
struct SsimParams {
  int window = 7;
  double dynamic_range = 1.0;

  double c1() const { return (0.01 * dynamic_range) * (0.01 * dynamic_range); }
  double c2() const { return (0.03 * dynamic_range) * (0.03 * dynamic_range); }
};

// Mean over all valid windows of the local SSIM map. Composed from graph
// primitives, so gradients w.r.t. x come out of the same backward pass.
TensorPtr ssim_node(TensorPtr x, TensorPtr y, const SsimParams& p = {});

/// 1 - ssim(pred, target); gradients flow to pred.
TensorPtr ssim_loss_node(TensorPtr pred, TensorPtr target, const SsimParams& p = {});

/// Value-only convenience wrappers over the same graph.
double ssim(const RealImage& x, const RealImage& y, const SsimParams& p = {});
double ssim_loss(const RealImage& pred, const RealImage& target,
                 const SsimParams& p = {});

}  // namespace mri::nn
