#pragma once

#include <cstdint>

#include "mri/types.hpp"

namespace mri {

// Random-ellipse phantom: one enclosing skull-like ellipse plus n_ellipses
// random interior ellipses, Gaussian-blurred, magnitude normalized to [0, 1],
// with a smooth low-order polynomial phase (range bounded by pi).
ComplexImage gen_phantom(uint64_t seed, int h, int w, int n_ellipses);

// Smooth complex Gaussian-lobe maps, one lobe per coil around the border,
// normalized per pixel to sum_c |S_c|^2 = 1 over the full frame.
SensitivityMaps gen_coil_maps(uint64_t seed, int c, int h, int w);

/// Multi-coil forward acquisition: k_c = fft2c(S_c * x).
KSpace forward_acquire(const ComplexImage& image, const SensitivityMaps& maps);

}  // namespace mri
