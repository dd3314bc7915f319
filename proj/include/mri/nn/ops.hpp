#pragma once

#include <memory>

#include "mri/nn/tensor.hpp"
#include "mri/types.hpp"

namespace mri::nn {

// ---- elementwise ----
TensorPtr add(TensorPtr a, TensorPtr b);
TensorPtr sub(TensorPtr a, TensorPtr b);
TensorPtr mul(TensorPtr a, TensorPtr b);
TensorPtr divide(TensorPtr a, TensorPtr b);
TensorPtr add_const(TensorPtr a, double c);
TensorPtr mul_const(TensorPtr a, double c);
TensorPtr log1p_elem(TensorPtr a);
TensorPtr softplus(TensorPtr a);

enum class Activation { relu, leaky_relu };
// Subgradient at the kink is 0 for relu; leaky_relu uses slope 0.2 for x <= 0.
TensorPtr activation(TensorPtr x, Activation kind);
TensorPtr relu(TensorPtr x);
TensorPtr leaky_relu(TensorPtr x);

// out = t * s, s a scalar node (both get gradients)
TensorPtr scale_by_scalar(TensorPtr t, TensorPtr s);

// ---- shaped real ops ----
// input [Cin,H,W], kernel [Cout,Cin,kh,kw] (odd), bias [Cout]; stride 1,
// zero "same" padding.
TensorPtr conv2d(TensorPtr input, TensorPtr kernel, TensorPtr bias);

enum class Resample { avgpool2, upsample_nearest2 };
TensorPtr resample(TensorPtr x, Resample mode);
TensorPtr avgpool2(TensorPtr x);            // [C,H,W] -> [C,H/2,W/2], even H,W
TensorPtr upsample_nearest2(TensorPtr x);   // [C,H,W] -> [C,2H,2W]

TensorPtr concat_channels(TensorPtr a, TensorPtr b);  // along axis 0
TensorPtr reduce_mean(TensorPtr x);                   // -> [1]
TensorPtr sum_channels(TensorPtr x);                  // [C,H,W] -> [1,H,W]
TensorPtr window_mean_valid(TensorPtr x, int k);      // [H,W] -> [H-k+1,W-k+1]
// (x - mean) / sqrt(var + eps) over the whole tensor, layer-norm backward
TensorPtr standardize(TensorPtr x, double eps = 1e-6);

// ---- complex ops; complex tensors are [C,H,W,2] (interleaved re,im) ----
TensorPtr fft2c_op(TensorPtr k);
TensorPtr ifft2c_op(TensorPtr k);
TensorPtr sense_expand_op(TensorPtr x, std::shared_ptr<const SensitivityMaps> maps);
TensorPtr sense_combine_op(TensorPtr y, std::shared_ptr<const SensitivityMaps> maps);
TensorPtr mask_columns_op(TensorPtr k, std::shared_ptr<const SamplingMask> mask);
TensorPtr complex_abs(TensorPtr k);          // [C,H,W,2] -> [C,H,W]
TensorPtr rss_op(TensorPtr y);               // [C,H,W,2] -> [H,W]
TensorPtr complex_to_channels(TensorPtr x);  // [H,W,2] -> [2,H,W]
TensorPtr channels_to_complex(TensorPtr x);  // [2,H,W] -> [H,W,2]

// ---- domain conversions (leaf constants unless stated) ----
TensorPtr tensor_from_kspace(const KSpace& k);
KSpace kspace_from_tensor(const Tensor& t);
TensorPtr tensor_from_real(const RealImage& img);
RealImage real_from_tensor(const Tensor& t);

}  // namespace mri::nn
