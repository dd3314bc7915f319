#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mri/metrics.hpp"
#include "mri/rng.hpp"

using namespace mri;

namespace {

RealImage random_image(Rng& rng, int h, int w) {
  RealImage img(h, w);
  for (auto& v : img.data) v = rng.uniform(0.0, 1.0);
  return img;
}

}  // namespace

TEST_CASE("nmse basics and brute-force agreement") {
  Rng rng(1);
  const RealImage ref = random_image(rng, 16, 16);
  CHECK(nmse(ref, ref) == 0.0);

  // direct substitution: ||ref|| = 2, ||ref - img|| = 0.1 -> 0.05
  RealImage r2(2, 2), i2(2, 2);
  r2.data = {2.0, 0.0, 0.0, 0.0};
  i2.data = {2.1, 0.0, 0.0, 0.0};
  CHECK(nmse(r2, i2) == doctest::Approx(0.05).epsilon(1e-12));

  for (int trial = 0; trial < 100; ++trial) {
    const RealImage a = random_image(rng, 8, 8);
    const RealImage b = random_image(rng, 8, 8);
    double num = 0, den = 0;
    for (size_t i = 0; i < a.data.size(); ++i) {
      num += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
      den += a.data[i] * a.data[i];
    }
    CHECK(std::abs(nmse(a, b) - std::sqrt(num) / std::sqrt(den)) < 1e-12);
  }

  RealImage zero(4, 4);
  CHECK_THROWS_AS(nmse(zero, zero), config_error);
}

TEST_CASE("psnr hand-computed case: one pixel off by 0.1 in a 4x4 ones image") {
  RealImage ref(4, 4), img(4, 4);
  for (auto& v : ref.data) v = 1.0;
  img.data = ref.data;
  img.data[5] += 0.1;
  // rmse = sqrt(0.01/16) = 0.025; psnr = 20 log10(1/0.025) = 32.04 dB
  CHECK(psnr(ref, img) == doctest::Approx(32.0412).epsilon(1e-4));
}

TEST_CASE("psnr is scale invariant and matches brute force") {
  Rng rng(2);
  const RealImage a = random_image(rng, 12, 12);
  RealImage b = random_image(rng, 12, 12);

  RealImage a2 = a, b2 = b;
  for (auto& v : a2.data) v *= 2.0;
  for (auto& v : b2.data) v *= 2.0;
  CHECK(psnr(a, b) == doctest::Approx(psnr(a2, b2)).epsilon(1e-12));

  for (int trial = 0; trial < 100; ++trial) {
    const RealImage x = random_image(rng, 8, 8);
    const RealImage y = random_image(rng, 8, 8);
    double mx = 0, acc = 0;
    for (size_t i = 0; i < x.data.size(); ++i) {
      mx = std::max(mx, x.data[i]);
      acc += (x.data[i] - y.data[i]) * (x.data[i] - y.data[i]);
    }
    const double expect = 20.0 * std::log10(mx / std::sqrt(acc / 64.0));
    CHECK(std::abs(psnr(x, y) - expect) < 1e-9);
  }
}

TEST_CASE("psnr returns the infinity marker on identical inputs") {
  Rng rng(3);
  const RealImage a = random_image(rng, 8, 8);
  CHECK(std::isinf(psnr(a, a)));
}

TEST_CASE("psnr strictly decreases with increasing noise amplitude") {
  Rng rng(4);
  const RealImage ref = random_image(rng, 16, 16);
  RealImage noise(16, 16);
  for (auto& v : noise.data) v = rng.uniform(-1, 1);

  double prev = std::numeric_limits<double>::infinity();
  for (double amp : {0.01, 0.03, 0.1, 0.3, 1.0}) {
    RealImage img = ref;
    for (size_t i = 0; i < img.data.size(); ++i) img.data[i] += amp * noise.data[i];
    const double p = psnr(ref, img);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("ssim_metric delegates to the nn implementation bitwise") {
  Rng rng(5);
  const RealImage a = random_image(rng, 16, 16);
  const RealImage b = random_image(rng, 16, 16);
  CHECK(ssim_metric(a, b) == nn::ssim(a, b));
  CHECK(ssim_metric(a, a) == 1.0);
}

TEST_CASE("ssim decreases under added noise") {
  Rng rng(6);
  const RealImage ref = random_image(rng, 16, 16);
  int decreased = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RealImage img = ref;
    for (auto& v : img.data) v += 0.1 * rng.normal();
    decreased += ssim_metric(ref, img) < 1.0;
  }
  CHECK(decreased == 100);
}

TEST_CASE("evaluate_batch aggregates, markers and serialization") {
  Rng rng(7);
  const RealImage a = random_image(rng, 16, 16);

  SUBCASE("single identical pair") {
    const MetricsReport rep = evaluate_batch({{a, a}}, "varnet", false);
    CHECK(rep.rows.size() == 1);
    CHECK(rep.nmse_pct.mean == 0.0);
    CHECK(std::isinf(rep.psnr_db.mean));
    CHECK(rep.ssim_pct.mean == doctest::Approx(100.0).epsilon(1e-12));

    const std::string j = report_to_json(rep);
    const MetricsReport back = report_from_json(j);
    CHECK(back.rows.size() == 1);
    CHECK(std::isinf(back.psnr_db.mean));
    CHECK(back.rows[0].nmse_pct == rep.rows[0].nmse_pct);
    CHECK(report_to_json(back) == j);  // lossless round trip
  }

  SUBCASE("two-pair means are the averages") {
    const RealImage b = random_image(rng, 16, 16);
    const RealImage c = random_image(rng, 16, 16);
    const MetricsReport rep = evaluate_batch({{a, b}, {a, c}}, "varnet", true);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.nmse_pct.mean ==
          doctest::Approx((rep.rows[0].nmse_pct + rep.rows[1].nmse_pct) / 2).epsilon(1e-12));
    CHECK(rep.ssim_pct.mean ==
          doctest::Approx((rep.rows[0].ssim_pct + rep.rows[1].ssim_pct) / 2).epsilon(1e-12));
  }

  SUBCASE("row failures do not abort the batch") {
    RealImage zero(16, 16);
    const RealImage b = random_image(rng, 16, 16);
    const MetricsReport rep = evaluate_batch({{zero, b}, {a, b}}, "varnet", false);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].failed);
    CHECK_FALSE(rep.rows[1].failed);
    CHECK(rep.nmse_pct.mean == doctest::Approx(rep.rows[1].nmse_pct));
  }

  SUBCASE("permutation covariance") {
    std::vector<std::pair<RealImage, RealImage>> pairs;
    for (int i = 0; i < 6; ++i) pairs.emplace_back(a, random_image(rng, 16, 16));
    const MetricsReport fwd = evaluate_batch(pairs, "m", false);
    std::reverse(pairs.begin(), pairs.end());
    const MetricsReport rev = evaluate_batch(pairs, "m", false);
    for (size_t i = 0; i < 6; ++i)
      CHECK(fwd.rows[i].nmse_pct == rev.rows[5 - i].nmse_pct);
    CHECK(std::abs(fwd.nmse_pct.mean - rev.nmse_pct.mean) < 1e-12);
    CHECK(std::abs(fwd.ssim_pct.stddev - rev.ssim_pct.stddev) < 1e-12);
  }

  SUBCASE("empty batch is rejected") {
    CHECK_THROWS_AS(evaluate_batch({}, "m", false), config_error);
  }
}

TEST_CASE("csv export lists one line per successful row") {
  Rng rng(8);
  const RealImage a = random_image(rng, 16, 16);
  const RealImage b = random_image(rng, 16, 16);
  const MetricsReport rep = evaluate_batch({{a, b}, {a, b}}, "mode_x", true);
  const std::string csv = report_to_csv(rep);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
  CHECK(csv.rfind("id,mode,motion,nmse_pct,psnr_db,ssim_pct\n", 0) == 0);
}
