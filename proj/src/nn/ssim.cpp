#include "mri/nn/ssim.hpp"

namespace mri::nn {

TensorPtr ssim_node(TensorPtr x, TensorPtr y, const SsimParams& p) {
  if (x->shape != y->shape) throw shape_error("ssim: shape mismatch");
  if (x->shape.size() != 2) throw shape_error("ssim: expected [H,W]");
  if (p.window > x->dim(0) || p.window > x->dim(1))
    throw shape_error("ssim: window larger than image");

  const double c1 = p.c1(), c2 = p.c2();
  auto mu_x = window_mean_valid(x, p.window);
  auto mu_y = window_mean_valid(y, p.window);
  auto var_x = sub(window_mean_valid(mul(x, x), p.window), mul(mu_x, mu_x));
  auto var_y = sub(window_mean_valid(mul(y, y), p.window), mul(mu_y, mu_y));
  auto cov = sub(window_mean_valid(mul(x, y), p.window), mul(mu_x, mu_y));

  auto num = mul(add_const(mul_const(mul(mu_x, mu_y), 2.0), c1),
                 add_const(mul_const(cov, 2.0), c2));
  auto den = mul(add_const(add(mul(mu_x, mu_x), mul(mu_y, mu_y)), c1),
                 add_const(add(var_x, var_y), c2));
  return reduce_mean(divide(num, den));
}

TensorPtr ssim_loss_node(TensorPtr pred, TensorPtr target, const SsimParams& p) {
  return add_const(mul_const(ssim_node(std::move(pred), std::move(target), p), -1.0), 1.0);
}

double ssim(const RealImage& x, const RealImage& y, const SsimParams& p) {
  return ssim_node(tensor_from_real(x), tensor_from_real(y), p)->value[0];
}

double ssim_loss(const RealImage& pred, const RealImage& target, const SsimParams& p) {
  return 1.0 - ssim(pred, target, p);
}

}  // namespace mri::nn
