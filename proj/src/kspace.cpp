#include "mri/kspace.hpp"

#include <algorithm>
#include <cmath>

#include "mri/rng.hpp"

namespace mri {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place. n must be a power of two.
void fft_radix2(cplx* a, int n, bool inverse) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len / 2;
    for (int j = 0; j < half; ++j) {
      const double ang = sign * 2.0 * kPi * j / len;
      const cplx w(std::cos(ang), std::sin(ang));
      for (int i = j; i < n; i += len) {
        const cplx u = a[i];
        const cplx v = a[i + half] * w;
        a[i] = u + v;
        a[i + half] = u - v;
      }
    }
  }
}

// Bluestein chirp-z for arbitrary n, via a power-of-two convolution.
void fft_bluestein(cplx* a, int n, bool inverse) {
  int m = 1;
  while (m < 2 * n - 1) m <<= 1;
  const double sign = inverse ? 1.0 : -1.0;

  std::vector<cplx> chirp(n);
  for (int i = 0; i < n; ++i) {
    // i^2 mod 2n keeps the phase argument bounded
    const long long q = (static_cast<long long>(i) * i) % (2LL * n);
    const double ang = sign * kPi * static_cast<double>(q) / n;
    chirp[i] = cplx(std::cos(ang), std::sin(ang));
  }

  std::vector<cplx> x(m, cplx(0, 0)), y(m, cplx(0, 0));
  for (int i = 0; i < n; ++i) x[i] = a[i] * chirp[i];
  y[0] = std::conj(chirp[0]);
  for (int i = 1; i < n; ++i) y[i] = y[m - i] = std::conj(chirp[i]);

  fft_radix2(x.data(), m, false);
  fft_radix2(y.data(), m, false);
  for (int i = 0; i < m; ++i) x[i] *= y[i];
  fft_radix2(x.data(), m, true);
  const double inv_m = 1.0 / m;
  for (int i = 0; i < n; ++i) a[i] = x[i] * inv_m * chirp[i];
}

// fftshift/ifftshift as index maps; they differ for odd sizes.
inline int ifftshift_src(int i, int n) { return (i + (n + 1) / 2) % n; }
inline int fftshift_src(int i, int n) { return (i + n / 2) % n; }

// Centered orthonormal 2D transform of one HxW plane.
void fft2c_plane(const cplx* src, cplx* dst, int h, int w, bool inverse) {
  std::vector<cplx> buf(static_cast<size_t>(h) * w);
  // ifftshift
  for (int r = 0; r < h; ++r) {
    const int sr = ifftshift_src(r, h);
    for (int c = 0; c < w; ++c)
      buf[static_cast<size_t>(r) * w + c] = src[static_cast<size_t>(sr) * w + ifftshift_src(c, w)];
  }
  // rows
  for (int r = 0; r < h; ++r) fft_1d(buf.data() + static_cast<size_t>(r) * w, w, inverse);
  // columns
  std::vector<cplx> col(h);
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) col[r] = buf[static_cast<size_t>(r) * w + c];
    fft_1d(col.data(), h, inverse);
    for (int r = 0; r < h; ++r) buf[static_cast<size_t>(r) * w + c] = col[r];
  }
  // fftshift + orthonormal scaling
  const double scale = 1.0 / std::sqrt(static_cast<double>(h) * w);
  for (int r = 0; r < h; ++r) {
    const int sr = fftshift_src(r, h);
    for (int c = 0; c < w; ++c)
      dst[static_cast<size_t>(r) * w + c] =
          buf[static_cast<size_t>(sr) * w + fftshift_src(c, w)] * scale;
  }
}

}  // namespace

void fft_1d(cplx* data, int n, bool inverse) {
  if (n <= 1) return;
  if (is_pow2(n))
    fft_radix2(data, n, inverse);
  else
    fft_bluestein(data, n, inverse);
}

void fft2c_buffer(const cplx* src, cplx* dst, int c, int h, int w, bool inverse) {
  const size_t plane = static_cast<size_t>(h) * w;
  for (int ci = 0; ci < c; ++ci)
    fft2c_plane(src + ci * plane, dst + ci * plane, h, w, inverse);
}

KSpace fft2c(const CoilImages& imgs) {
  if (imgs.h < 2 || imgs.w < 2) throw shape_error("fft2c: H, W must be >= 2");
  KSpace k(imgs.c, imgs.h, imgs.w);
  const size_t plane = static_cast<size_t>(imgs.h) * imgs.w;
  for (int ci = 0; ci < imgs.c; ++ci)
    fft2c_plane(imgs.data.data() + ci * plane, k.data.data() + ci * plane, imgs.h,
                imgs.w, false);
  return k;
}

KSpace fft2c(const ComplexImage& img) {
  CoilImages one(1, img.h, img.w);
  one.data = img.data;
  return fft2c(one);
}

CoilImages ifft2c(const KSpace& k) {
  if (k.h < 2 || k.w < 2) throw shape_error("ifft2c: H, W must be >= 2");
  CoilImages imgs(k.c, k.h, k.w);
  const size_t plane = static_cast<size_t>(k.h) * k.w;
  for (int ci = 0; ci < k.c; ++ci)
    fft2c_plane(k.data.data() + ci * plane, imgs.data.data() + ci * plane, k.h,
                k.w, true);
  return imgs;
}

ComplexImage fft2c_image(const ComplexImage& img) {
  ComplexImage out(img.h, img.w);
  fft2c_plane(img.data.data(), out.data.data(), img.h, img.w, false);
  return out;
}

ComplexImage ifft2c_image(const ComplexImage& k) {
  ComplexImage out(k.h, k.w);
  fft2c_plane(k.data.data(), out.data.data(), k.h, k.w, true);
  return out;
}

int center_block_width(int w, double center_fraction) {
  return static_cast<int>(std::floor(center_fraction * w + 0.5));
}

SamplingMask make_equispaced_mask(int w, int accel, double center_fraction,
                                  uint64_t seed) {
  if (accel < 1) throw config_error("mask: accel must be >= 1");
  if (!(center_fraction > 0.0 && center_fraction < 1.0))
    throw config_error("mask: center_fraction must be in (0, 1)");
  const int nc = center_block_width(w, center_fraction);
  if (nc > w) throw config_error("mask: center block exceeds width");

  SamplingMask m;
  m.w = w;
  m.accel = accel;
  m.center_fraction = center_fraction;
  m.cols.assign(static_cast<size_t>(w), 0);

  Rng rng(seed);
  const int offset = static_cast<int>(rng.below(static_cast<uint64_t>(accel)));
  for (int c = offset; c < w; c += accel) m.cols[static_cast<size_t>(c)] = 1;

  const int start = (w - nc) / 2;
  for (int c = start; c < start + nc; ++c) m.cols[static_cast<size_t>(c)] = 1;
  return m;
}

KSpace apply_mask(const KSpace& k, const SamplingMask& m) {
  if (k.w != m.w) throw shape_error("apply_mask: width mismatch");
  KSpace out(k.c, k.h, k.w);
  for (int ci = 0; ci < k.c; ++ci)
    for (int r = 0; r < k.h; ++r)
      for (int c = 0; c < k.w; ++c)
        out.at(ci, r, c) = m.sampled(c) ? k.at(ci, r, c) : cplx(0, 0);
  return out;
}

RealImage rss_combine(const CoilImages& imgs) {
  if (imgs.c < 1) throw shape_error("rss_combine: need at least one coil");
  RealImage out(imgs.h, imgs.w);
  for (int ci = 0; ci < imgs.c; ++ci)
    for (int r = 0; r < imgs.h; ++r)
      for (int c = 0; c < imgs.w; ++c) out.at(r, c) += std::norm(imgs.at(ci, r, c));
  for (double& v : out.data) v = std::sqrt(v);
  return out;
}

ComplexImage sense_combine(const CoilImages& imgs, const SensitivityMaps& maps) {
  require_same_shape(imgs, maps);
  ComplexImage out(imgs.h, imgs.w);
  for (int ci = 0; ci < imgs.c; ++ci)
    for (int r = 0; r < imgs.h; ++r)
      for (int c = 0; c < imgs.w; ++c)
        out.at(r, c) += std::conj(maps.at(ci, r, c)) * imgs.at(ci, r, c);
  return out;
}

CoilImages sense_expand(const ComplexImage& img, const SensitivityMaps& maps) {
  require_same_shape(img, maps);
  CoilImages out(maps.c, img.h, img.w);
  for (int ci = 0; ci < maps.c; ++ci)
    for (int r = 0; r < img.h; ++r)
      for (int c = 0; c < img.w; ++c)
        out.at(ci, r, c) = maps.at(ci, r, c) * img.at(r, c);
  return out;
}

SensitivityMaps estimate_sens_maps(const KSpace& k, double center_fraction) {
  const int nc = center_block_width(k.w, center_fraction);
  const int start = (k.w - nc) / 2;

  KSpace acs(k.c, k.h, k.w);
  for (int ci = 0; ci < k.c; ++ci)
    for (int r = 0; r < k.h; ++r)
      for (int c = start; c < start + nc; ++c) acs.at(ci, r, c) = k.at(ci, r, c);

  const CoilImages low = ifft2c(acs);
  const RealImage rss = rss_combine(low);
  double rss_max = 0.0;
  for (double v : rss.data) rss_max = std::max(rss_max, v);
  const double thr = 0.05 * rss_max;

  SensitivityMaps maps(k.c, k.h, k.w);
  for (int r = 0; r < k.h; ++r)
    for (int c = 0; c < k.w; ++c) {
      const double denom = rss.at(r, c);
      if (denom <= thr || denom == 0.0) continue;  // outside support: exact zero
      double s2 = 0.0;
      for (int ci = 0; ci < k.c; ++ci) {
        maps.at(ci, r, c) = low.at(ci, r, c) / denom;
        s2 += std::norm(maps.at(ci, r, c));
      }
      const double renorm = 1.0 / std::sqrt(s2);
      for (int ci = 0; ci < k.c; ++ci) maps.at(ci, r, c) *= renorm;
    }
  return maps;
}

}  // namespace mri
