#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mri/errors.hpp"

namespace mri {

using cplx = std::complex<double>;

// Complex 2D image, row-major. Signal scaled so max |pixel| <= 1.
struct ComplexImage {
  int h = 0, w = 0;
  std::vector<cplx> data;

  ComplexImage() = default;
  ComplexImage(int h_, int w_) : h(h_), w(w_), data(static_cast<size_t>(h_) * w_) {}

  cplx& at(int r, int c) { return data[static_cast<size_t>(r) * w + c]; }
  const cplx& at(int r, int c) const { return data[static_cast<size_t>(r) * w + c]; }
  size_t size() const { return data.size(); }
};

// Per-coil complex image stack (C x H x W, row-major within each coil).
struct CoilImages {
  int c = 0, h = 0, w = 0;
  std::vector<cplx> data;

  CoilImages() = default;
  CoilImages(int c_, int h_, int w_)
      : c(c_), h(h_), w(w_), data(static_cast<size_t>(c_) * h_ * w_) {}

  cplx& at(int ci, int r, int cc) {
    return data[(static_cast<size_t>(ci) * h + r) * w + cc];
  }
  const cplx& at(int ci, int r, int cc) const {
    return data[(static_cast<size_t>(ci) * h + r) * w + cc];
  }
  size_t size() const { return data.size(); }
};

// Coil sensitivity maps S_c. On the support mask sum_c |S_c|^2 = 1; outside
// it the maps are exactly zero.
struct SensitivityMaps {
  int c = 0, h = 0, w = 0;
  std::vector<cplx> data;

  SensitivityMaps() = default;
  SensitivityMaps(int c_, int h_, int w_)
      : c(c_), h(h_), w(w_), data(static_cast<size_t>(c_) * h_ * w_) {}

  cplx& at(int ci, int r, int cc) {
    return data[(static_cast<size_t>(ci) * h + r) * w + cc];
  }
  const cplx& at(int ci, int r, int cc) const {
    return data[(static_cast<size_t>(ci) * h + r) * w + cc];
  }
};

// Multi-coil k-space, DC component at (H/2, W/2) (centered convention).
struct KSpace {
  int c = 0, h = 0, w = 0;
  std::vector<cplx> data;

  KSpace() = default;
  KSpace(int c_, int h_, int w_)
      : c(c_), h(h_), w(w_), data(static_cast<size_t>(c_) * h_ * w_) {}

  cplx& at(int ci, int r, int cc) {
    return data[(static_cast<size_t>(ci) * h + r) * w + cc];
  }
  const cplx& at(int ci, int r, int cc) const {
    return data[(static_cast<size_t>(ci) * h + r) * w + cc];
  }
  size_t size() const { return data.size(); }
};

// Real 2D image (rss output, metrics input).
struct RealImage {
  int h = 0, w = 0;
  std::vector<double> data;

  RealImage() = default;
  RealImage(int h_, int w_) : h(h_), w(w_), data(static_cast<size_t>(h_) * w_, 0.0) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * w + c]; }
  const double& at(int r, int c) const { return data[static_cast<size_t>(r) * w + c]; }
  size_t size() const { return data.size(); }
};

// 1D column mask over phase-encode columns, constant along rows.
struct SamplingMask {
  int w = 0;
  std::vector<uint8_t> cols;  // 1 = sampled
  int accel = 1;
  double center_fraction = 0.0;

  bool sampled(int col) const { return cols[static_cast<size_t>(col)] != 0; }
  int n_sampled() const {
    int n = 0;
    for (uint8_t v : cols) n += v;
    return n;
  }
};

inline void require_same_shape(const ComplexImage& x, const SensitivityMaps& m) {
  if (x.h != m.h || x.w != m.w)
    throw shape_error("image/maps shape mismatch");
}

inline void require_same_shape(const CoilImages& y, const SensitivityMaps& m) {
  if (y.c != m.c || y.h != m.h || y.w != m.w)
    throw shape_error("coil images/maps shape mismatch");
}

}  // namespace mri
