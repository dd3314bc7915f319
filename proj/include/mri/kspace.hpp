#pragma once

#include "mri/types.hpp"

namespace mri {

// Unnormalized 1D DFT, exponent sign -1 forward / +1 inverse. Radix-2 for
// power-of-two lengths, Bluestein otherwise. Bit-exact across runs.
void fft_1d(cplx* data, int n, bool inverse);

/// Centered orthonormal 2D FFT per coil: fftshift(fft(ifftshift(x)))/sqrt(HW).
KSpace fft2c(const CoilImages& imgs);
KSpace fft2c(const ComplexImage& img);

// Raw-buffer form over C planes of H x W; src and dst may alias.
void fft2c_buffer(const cplx* src, cplx* dst, int c, int h, int w, bool inverse);

/// Exact inverse of fft2c under the same centering and 1/sqrt(HW) scaling.
CoilImages ifft2c(const KSpace& k);

/// Single-image helpers (C = 1 views without the coil axis).
ComplexImage fft2c_image(const ComplexImage& img);
ComplexImage ifft2c_image(const ComplexImage& k);

// Center block of round-half-up(cf * w) columns plus every accel-th column
// starting at a seeded offset in [0, accel).
SamplingMask make_equispaced_mask(int w, int accel, double center_fraction,
                                  uint64_t seed);

/// Zero out unsampled columns. Linear idempotent projection.
KSpace apply_mask(const KSpace& k, const SamplingMask& m);

/// Per-pixel sqrt(sum_c |y_c|^2).
RealImage rss_combine(const CoilImages& imgs);

/// Per-pixel sum_c conj(S_c) * y_c.
ComplexImage sense_combine(const CoilImages& imgs, const SensitivityMaps& maps);

/// Per-coil S_c * x. Adjoint of sense_combine.
CoilImages sense_expand(const ComplexImage& img, const SensitivityMaps& maps);

// Classical ACS estimator: keep center columns, ifft, divide each coil by the
// rss image where rss exceeds 5% of its max, renormalize, zero elsewhere.
SensitivityMaps estimate_sens_maps(const KSpace& k, double center_fraction);

// Shared rounding convention for the ACS block width (round half up).
int center_block_width(int w, double center_fraction);

}  // namespace mri
