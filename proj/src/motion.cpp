#include "mri/motion.hpp"

#include <algorithm>
#include <cmath>

#include "mri/kspace.hpp"
#include "mri/phantom.hpp"

namespace mri {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

MotionTrajectory sample_trajectory(Rng& rng, int n_lines, int max_events,
                                   double max_trans, double max_rot) {
  if (n_lines < 2) throw config_error("sample_trajectory: n_lines must be >= 2");

  MotionTrajectory traj;
  traj.n_lines = n_lines;

  int count = rng.uniform_int(0, max_events);
  count = std::min(count, n_lines - 1);  // start lines live in [1, n_lines)

  // partial Fisher-Yates over candidate start lines 1..n_lines-1
  std::vector<int> lines(static_cast<size_t>(n_lines - 1));
  for (int i = 0; i < n_lines - 1; ++i) lines[static_cast<size_t>(i)] = i + 1;
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(n_lines - 1 - i)));
    std::swap(lines[static_cast<size_t>(i)], lines[static_cast<size_t>(j)]);
  }
  std::sort(lines.begin(), lines.begin() + count);

  traj.events.resize(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    MotionEvent& e = traj.events[static_cast<size_t>(i)];
    e.start_line = lines[static_cast<size_t>(i)];
    e.dx = rng.uniform(-max_trans, max_trans);
    e.dy = rng.uniform(-max_trans, max_trans);
    e.theta = rng.uniform(-max_rot, max_rot);
  }
  return traj;
}

MotionTrajectory sample_trajectory(uint64_t seed, int n_lines, int max_events,
                                   double max_trans, double max_rot) {
  Rng rng(seed);
  return sample_trajectory(rng, n_lines, max_events, max_trans, max_rot);
}

ComplexImage rigid_transform(const ComplexImage& img, double dx, double dy,
                             double theta) {
  ComplexImage out = img;

  if (theta != 0.0) {
    const double rad = theta * kPi / 180.0;
    const double ca = std::cos(rad), sa = std::sin(rad);
    const double cy = 0.5 * (img.h - 1), cx = 0.5 * (img.w - 1);
    ComplexImage rot(img.h, img.w);
    for (int r = 0; r < img.h; ++r)
      for (int c = 0; c < img.w; ++c) {
        // inverse mapping: sample the source at R(-theta) * (p - center)
        const double x = c - cx, y = r - cy;
        const double sx = ca * x + sa * y + cx;
        const double sy = -sa * x + ca * y + cy;
        const int x0 = static_cast<int>(std::floor(sx));
        const int y0 = static_cast<int>(std::floor(sy));
        const double fx = sx - x0, fy = sy - y0;
        cplx acc(0, 0);
        for (int oy = 0; oy <= 1; ++oy)
          for (int ox = 0; ox <= 1; ++ox) {
            const int xi = x0 + ox, yi = y0 + oy;
            if (xi < 0 || xi >= img.w || yi < 0 || yi >= img.h) continue;
            const double wgt = (ox ? fx : 1.0 - fx) * (oy ? fy : 1.0 - fy);
            acc += wgt * img.at(yi, xi);
          }
        rot.at(r, c) = acc;
      }
    out = std::move(rot);
  }

  if (dx != 0.0 || dy != 0.0) {
    ComplexImage k = fft2c_image(out);
    const int h = img.h, w = img.w;
    for (int r = 0; r < h; ++r) {
      const double ky = r - h / 2;
      for (int c = 0; c < w; ++c) {
        const double kx = c - w / 2;
        const double ang = -2.0 * kPi * (kx * dx / w + ky * dy / h);
        k.at(r, c) *= cplx(std::cos(ang), std::sin(ang));
      }
    }
    out = ifft2c_image(k);
  }
  return out;
}

KSpace corrupt_kspace(const ComplexImage& image, const SensitivityMaps& maps,
                      const MotionTrajectory& traj) {
  require_same_shape(image, maps);
  if (traj.n_lines != image.w)
    throw shape_error("corrupt_kspace: trajectory n_lines must equal image width");

  KSpace out = forward_acquire(image, maps);  // identity segment fills everything
  const size_t n_events = traj.events.size();
  for (size_t i = 0; i < n_events; ++i) {
    const MotionEvent& e = traj.events[i];
    const int from = e.start_line;
    const int to = i + 1 < n_events ? traj.events[i + 1].start_line : traj.n_lines;
    const ComplexImage moved = rigid_transform(image, e.dx, e.dy, e.theta);
    const KSpace k_moved = forward_acquire(moved, maps);
    for (int ci = 0; ci < out.c; ++ci)
      for (int r = 0; r < out.h; ++r)
        for (int c = from; c < to; ++c) out.at(ci, r, c) = k_moved.at(ci, r, c);
  }
  return out;
}

}  // namespace mri
