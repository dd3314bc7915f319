#include "mri/phantom.hpp"

#include <algorithm>
#include <cmath>

#include "mri/kspace.hpp"
#include "mri/rng.hpp"

namespace mri {

namespace {

struct Ellipse {
  double cy, cx, ry, rx, angle, intensity;
};

void rasterize(RealImage& img, const Ellipse& e) {
  const double ca = std::cos(e.angle), sa = std::sin(e.angle);
  for (int r = 0; r < img.h; ++r)
    for (int c = 0; c < img.w; ++c) {
      const double dy = r - e.cy, dx = c - e.cx;
      const double u = (dx * ca + dy * sa) / e.rx;
      const double v = (-dx * sa + dy * ca) / e.ry;
      if (u * u + v * v <= 1.0) img.at(r, c) += e.intensity;
    }
}

// Separable Gaussian blur, sigma in pixels, reflected boundary.
RealImage gaussian_blur(const RealImage& img, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(static_cast<size_t>(2 * radius + 1));
  double ksum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[static_cast<size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
    ksum += kernel[static_cast<size_t>(i + radius)];
  }
  for (double& v : kernel) v /= ksum;

  auto reflect = [](int i, int n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
    return i;
  };

  RealImage tmp(img.h, img.w), out(img.h, img.w);
  for (int r = 0; r < img.h; ++r)
    for (int c = 0; c < img.w; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[static_cast<size_t>(i + radius)] * img.at(r, reflect(c + i, img.w));
      tmp.at(r, c) = acc;
    }
  for (int r = 0; r < img.h; ++r)
    for (int c = 0; c < img.w; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[static_cast<size_t>(i + radius)] * tmp.at(reflect(r + i, img.h), c);
      out.at(r, c) = acc;
    }
  return out;
}

}  // namespace

ComplexImage gen_phantom(uint64_t seed, int h, int w, int n_ellipses) {
  if (h < 16 || w < 16) throw config_error("gen_phantom: h and w must be >= 16");
  if (n_ellipses < 1) throw config_error("gen_phantom: n_ellipses must be >= 1");

  Rng rng(seed);
  RealImage mag(h, w);

  // enclosing skull-like ellipse
  Ellipse skull;
  skull.cy = 0.5 * (h - 1);
  skull.cx = 0.5 * (w - 1);
  skull.ry = (0.38 + 0.05 * rng.uniform()) * h;
  skull.rx = (0.38 + 0.05 * rng.uniform()) * w;
  skull.angle = 0.0;
  skull.intensity = 0.25 + 0.15 * rng.uniform();
  rasterize(mag, skull);

  for (int i = 0; i < n_ellipses; ++i) {
    Ellipse e;
    e.cy = skull.cy + (rng.uniform() - 0.5) * 0.9 * skull.ry;
    e.cx = skull.cx + (rng.uniform() - 0.5) * 0.9 * skull.rx;
    e.ry = (0.05 + 0.20 * rng.uniform()) * h;
    e.rx = (0.05 + 0.20 * rng.uniform()) * w;
    e.angle = rng.uniform(0.0, 3.14159265358979323846);
    e.intensity = rng.uniform();
    rasterize(mag, e);
  }

  mag = gaussian_blur(mag, 1.0);

  double peak = 0.0;
  for (double v : mag.data) peak = std::max(peak, v);
  if (peak > 0.0)
    for (double& v : mag.data) v /= peak;

  // smooth bilinear phase, total range bounded by pi
  double a = rng.uniform(-1.0, 1.0);
  double b = rng.uniform(-1.0, 1.0);
  double c = rng.uniform(-1.0, 1.0);
  const double s = std::abs(a) + std::abs(b) + std::abs(c);
  const double scale = s > 0.0 ? 3.14159265358979323846 * rng.uniform(0.3, 1.0) / s : 0.0;
  a *= scale;
  b *= scale;
  c *= scale;

  ComplexImage out(h, w);
  for (int r = 0; r < h; ++r) {
    const double y = h > 1 ? 2.0 * r / (h - 1) - 1.0 : 0.0;
    for (int cc = 0; cc < w; ++cc) {
      const double x = w > 1 ? 2.0 * cc / (w - 1) - 1.0 : 0.0;
      const double phase = a * x + b * y + c * x * y;
      out.at(r, cc) = std::polar(mag.at(r, cc), phase);
    }
  }
  return out;
}

SensitivityMaps gen_coil_maps(uint64_t seed, int c, int h, int w) {
  if (c < 1) throw config_error("gen_coil_maps: c must be >= 1");

  Rng rng(seed);
  const double sigma = 0.5 * std::min(h, w);
  const double cy = 0.5 * (h - 1), cx = 0.5 * (w - 1);
  const double theta0 = rng.uniform(0.0, 2.0 * 3.14159265358979323846);

  SensitivityMaps maps(c, h, w);
  for (int ci = 0; ci < c; ++ci) {
    const double theta = theta0 + 2.0 * 3.14159265358979323846 * ci / c;
    // lobe center on the border ellipse of the frame
    const double ly = cy + 0.5 * (h - 1) * std::sin(theta);
    const double lx = cx + 0.5 * (w - 1) * std::cos(theta);
    // gentle per-coil linear phase
    const double pa = rng.uniform(-0.5, 0.5), pb = rng.uniform(-0.5, 0.5);
    for (int r = 0; r < h; ++r)
      for (int cc = 0; cc < w; ++cc) {
        const double d2 = (r - ly) * (r - ly) + (cc - lx) * (cc - lx);
        const double m = std::exp(-0.5 * d2 / (sigma * sigma));
        const double ph = pa * (2.0 * r / h - 1.0) + pb * (2.0 * cc / w - 1.0);
        maps.at(ci, r, cc) = std::polar(m, ph);
      }
  }

  // per-pixel normalization: sum_c |S_c|^2 = 1 (support = full frame)
  for (int r = 0; r < h; ++r)
    for (int cc = 0; cc < w; ++cc) {
      double s2 = 0.0;
      for (int ci = 0; ci < c; ++ci) s2 += std::norm(maps.at(ci, r, cc));
      const double inv = 1.0 / std::sqrt(s2);
      for (int ci = 0; ci < c; ++ci) maps.at(ci, r, cc) *= inv;
    }
  return maps;
}

KSpace forward_acquire(const ComplexImage& image, const SensitivityMaps& maps) {
  require_same_shape(image, maps);
  return fft2c(sense_expand(image, maps));
}

}  // namespace mri
