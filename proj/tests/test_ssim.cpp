#include <doctest.h>

#include <cmath>

#include "mri/nn/ssim.hpp"
#include "mri/phantom.hpp"
#include "mri/rng.hpp"

using namespace mri;
using namespace mri::nn;

namespace {

RealImage random_image(Rng& rng, int h, int w, double lo = 0.0, double hi = 1.0) {
  RealImage img(h, w);
  for (auto& v : img.data) v = rng.uniform(lo, hi);
  return img;
}

}  // namespace

TEST_CASE("ssim of an image with itself is exactly 1") {
  Rng rng(1);
  const RealImage x = random_image(rng, 16, 16);
  CHECK(ssim(x, x) == 1.0);
}

TEST_CASE("ssim of constant images matches the closed form") {
  const double a = 0.4, b = 0.7;
  RealImage xa(12, 12), xb(12, 12);
  for (auto& v : xa.data) v = a;
  for (auto& v : xb.data) v = b;
  const SsimParams p;
  const double expect = (2 * a * b + p.c1()) / (a * a + b * b + p.c1());
  CHECK(ssim(xa, xb) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("ssim is symmetric and bounded by 1") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const RealImage x = random_image(rng, 14, 14);
    const RealImage y = random_image(rng, 14, 14);
    const double sxy = ssim(x, y);
    const double syx = ssim(y, x);
    CHECK(std::abs(sxy - syx) < 1e-12);
    CHECK(sxy <= 1.0 + 1e-12);
    CHECK(sxy >= -1.0 - 1e-12);
  }
}

TEST_CASE("ssim drops below 1 for any perturbation >= 1e-3") {
  Rng rng(3);
  const RealImage x = random_image(rng, 16, 16);
  RealImage y = x;
  y.at(8, 8) += 1e-3;
  CHECK(ssim(x, y) < 1.0);
}

TEST_CASE("ssim rejects oversized windows") {
  RealImage x(5, 5);
  CHECK_THROWS_AS(ssim(x, x), shape_error);  // default window 7 > 5
}

TEST_CASE("ssim gradient matches finite differences") {
  Rng rng(4);
  const RealImage xi = random_image(rng, 12, 12);
  const RealImage yi = random_image(rng, 12, 12);

  auto x = tensor_from_real(xi);
  x->requires_grad = true;
  auto y = tensor_from_real(yi);
  auto loss = ssim_loss_node(x, y);
  backward(loss);

  double worst = 0;
  const double h = 1e-5;
  for (size_t i = 0; i < x->value.size(); ++i) {
    const double keep = x->value[i];
    x->value[i] = keep + h;
    const double fp = ssim_loss_node(x, y)->value[0];
    x->value[i] = keep - h;
    const double fm = ssim_loss_node(x, y)->value[0];
    x->value[i] = keep;
    const double fd = (fp - fm) / (2 * h);
    const double denom = std::max({std::abs(fd), std::abs(x->grad[i]), 1e-8});
    worst = std::max(worst, std::abs(fd - x->grad[i]) / denom);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("ssim_loss is zero at the target and bounded in [0, 2]") {
  Rng rng(5);
  const RealImage x = random_image(rng, 16, 16);
  CHECK(ssim_loss(x, x) == 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    const RealImage a = random_image(rng, 10, 10, -1, 1);
    const RealImage b = random_image(rng, 10, 10, -1, 1);
    const double l = ssim_loss(a, b);
    CHECK(l >= 0.0);
    CHECK(l <= 2.0);
  }
}

TEST_CASE("ssim_loss decreases monotonically while blending toward the target") {
  const RealImage target_img = [] {
    const ComplexImage p = gen_phantom(11, 32, 32, 5);
    RealImage r(32, 32);
    for (size_t i = 0; i < r.data.size(); ++i) r.data[i] = std::abs(p.data[i]);
    return r;
  }();
  Rng rng(6);
  const RealImage start = random_image(rng, 32, 32);

  double prev = 1e9;
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    RealImage blend(32, 32);
    for (size_t j = 0; j < blend.data.size(); ++j)
      blend.data[j] = (1 - t) * start.data[j] + t * target_img.data[j];
    const double l = ssim_loss(blend, target_img);
    CHECK(l < prev + 1e-12);
    prev = l;
  }
  CHECK(prev == 0.0);  // final blend is the target itself
}
