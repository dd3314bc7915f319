#include <doctest.h>

#include <cmath>

#include "mri/kspace.hpp"
#include "mri/phantom.hpp"
#include "mri/rng.hpp"

using namespace mri;

namespace {

ComplexImage random_image(Rng& rng, int h, int w) {
  ComplexImage img(h, w);
  for (auto& v : img.data) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return img;
}

CoilImages random_coils(Rng& rng, int c, int h, int w) {
  CoilImages imgs(c, h, w);
  for (auto& v : imgs.data) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return imgs;
}

double norm2(const std::vector<cplx>& v) {
  double acc = 0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("fft_1d matches a direct DFT for assorted lengths") {
  Rng rng(11);
  for (int n : {1, 2, 3, 4, 5, 6, 7, 8, 12, 15, 16, 17, 64}) {
    std::vector<cplx> x(static_cast<size_t>(n));
    for (auto& v : x) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));

    std::vector<cplx> expect(static_cast<size_t>(n), cplx(0, 0));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        const double ang = -2.0 * M_PI * k * j / n;
        expect[static_cast<size_t>(k)] += x[static_cast<size_t>(j)] * cplx(std::cos(ang), std::sin(ang));
      }

    std::vector<cplx> got = x;
    fft_1d(got.data(), n, false);
    CHECK(max_diff(got, expect) < 1e-10);

    fft_1d(got.data(), n, true);  // unnormalized inverse = n * original
    for (auto& v : got) v /= static_cast<double>(n);
    CHECK(max_diff(got, x) < 1e-10);
  }
}

TEST_CASE("fft2c of a constant image concentrates at the center bin") {
  ComplexImage img(8, 8);
  for (auto& v : img.data) v = cplx(1.0, 0.0);
  const KSpace k = fft2c(img);
  CHECK(std::abs(k.at(0, 4, 4) - cplx(8.0, 0.0)) < 1e-12);
  double off = 0;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      if (r != 4 || c != 4) off = std::max(off, std::abs(k.at(0, r, c)));
  CHECK(off < 1e-12);
}

TEST_CASE("impulse at center gives flat k-space magnitude") {
  ComplexImage img(16, 16);
  img.at(8, 8) = cplx(1.0, 0.0);
  const KSpace k = fft2c(img);
  for (const auto& v : k.data) CHECK(std::abs(std::abs(v) - 1.0 / 16.0) < 1e-12);
}

TEST_CASE("fft2c/ifft2c round trip and Parseval on sizes 8, 16, 64") {
  Rng rng(3);
  for (int n : {8, 16, 64}) {
    const CoilImages x = random_coils(rng, 2, n, n);
    const KSpace k = fft2c(x);
    CHECK(std::abs(norm2(k.data) - norm2(x.data)) < 1e-10 * norm2(x.data));
    const CoilImages back = ifft2c(k);
    CHECK(max_diff(back.data, x.data) < 1e-10);
  }
}

TEST_CASE("ifft2c of a center impulse is a constant image") {
  KSpace k(1, 8, 8);
  k.at(0, 4, 4) = cplx(8.0, 0.0);
  const CoilImages img = ifft2c(k);
  for (const auto& v : img.data) CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("ifft2c is linear") {
  Rng rng(5);
  const CoilImages k1 = random_coils(rng, 1, 16, 16);
  const CoilImages k2 = random_coils(rng, 1, 16, 16);
  const double a = 0.7;

  KSpace lhs_in(1, 16, 16);
  for (size_t i = 0; i < lhs_in.data.size(); ++i)
    lhs_in.data[i] = a * k1.data[i] + k2.data[i];
  const CoilImages lhs = ifft2c(lhs_in);

  KSpace k1s(1, 16, 16), k2s(1, 16, 16);
  k1s.data = k1.data;
  k2s.data = k2.data;
  const CoilImages i1 = ifft2c(k1s), i2 = ifft2c(k2s);
  double m = 0;
  for (size_t i = 0; i < lhs.data.size(); ++i)
    m = std::max(m, std::abs(lhs.data[i] - (a * i1.data[i] + i2.data[i])));
  CHECK(m < 1e-10);
}

TEST_CASE("equispaced mask geometry") {
  SUBCASE("0.08 of 320 rounds to 26 center columns") {
    const SamplingMask m = make_equispaced_mask(320, 4, 0.08, 0);
    int center = 0;
    const int start = (320 - 26) / 2;
    for (int c = start; c < start + 26; ++c) center += m.sampled(c);
    CHECK(center == 26);
    CHECK(center_block_width(320, 0.08) == 26);
  }
  SUBCASE("accel 1 samples every column") {
    const SamplingMask m = make_equispaced_mask(64, 1, 0.08, 9);
    CHECK(m.n_sampled() == 64);
  }
  SUBCASE("total sampled columns stay within the union bound") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const SamplingMask m = make_equispaced_mask(320, 4, 0.08, seed);
      CHECK(m.n_sampled() >= 80);
      CHECK(m.n_sampled() <= 80 + 26);
    }
  }
  SUBCASE("deterministic per seed and center always sampled") {
    const SamplingMask a = make_equispaced_mask(128, 4, 0.08, 42);
    const SamplingMask b = make_equispaced_mask(128, 4, 0.08, 42);
    CHECK(a.cols == b.cols);
    const int nc = center_block_width(128, 0.08);
    const int start = (128 - nc) / 2;
    for (int c = start; c < start + nc; ++c) CHECK(a.sampled(c));
  }
  SUBCASE("rejects invalid parameters") {
    CHECK_THROWS_AS(make_equispaced_mask(64, 0, 0.08, 0), config_error);
    CHECK_THROWS_AS(make_equispaced_mask(64, 4, 0.0, 0), config_error);
    CHECK_THROWS_AS(make_equispaced_mask(64, 4, 1.0, 0), config_error);
  }
}

TEST_CASE("apply_mask is an idempotent linear projection") {
  Rng rng(7);
  const SamplingMask m = make_equispaced_mask(32, 4, 0.1, 1);
  KSpace k(2, 32, 32);
  for (auto& v : k.data) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));

  const KSpace once = apply_mask(k, m);
  const KSpace twice = apply_mask(once, m);
  CHECK(max_diff(once.data, twice.data) == 0.0);

  for (int c = 0; c < 32; ++c)
    if (!m.sampled(c))
      for (int r = 0; r < 32; ++r) CHECK(once.at(0, r, c) == cplx(0, 0));

  SUBCASE("full mask is the identity") {
    const SamplingMask full = make_equispaced_mask(32, 1, 0.1, 0);
    CHECK(max_diff(apply_mask(k, full).data, k.data) == 0.0);
  }
  SUBCASE("linearity") {
    KSpace k2(2, 32, 32);
    for (auto& v : k2.data) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double a = -1.3;
    KSpace mix(2, 32, 32);
    for (size_t i = 0; i < mix.data.size(); ++i) mix.data[i] = a * k.data[i] + k2.data[i];
    const KSpace lhs = apply_mask(mix, m);
    const KSpace m1 = apply_mask(k, m), m2 = apply_mask(k2, m);
    double err = 0;
    for (size_t i = 0; i < lhs.data.size(); ++i)
      err = std::max(err, std::abs(lhs.data[i] - (a * m1.data[i] + m2.data[i])));
    CHECK(err < 1e-12);
  }
  SUBCASE("width mismatch throws") {
    KSpace bad(1, 32, 16);
    CHECK_THROWS_AS(apply_mask(bad, m), shape_error);
  }
}

TEST_CASE("rss_combine basics") {
  CoilImages y(2, 1, 1);
  y.at(0, 0, 0) = cplx(3, 0);
  y.at(1, 0, 0) = cplx(0, 4);
  CHECK(rss_combine(y).at(0, 0) == doctest::Approx(5.0).epsilon(1e-12));

  CoilImages single(1, 2, 2);
  single.at(0, 0, 0) = cplx(-2, 0);
  single.at(0, 1, 1) = cplx(0, 0.5);
  const RealImage r = rss_combine(single);
  CHECK(r.at(0, 0) == doctest::Approx(2.0));
  CHECK(r.at(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("rss of sense-expanded image recovers |x| under normalized maps") {
  Rng rng(19);
  const ComplexImage x = random_image(rng, 32, 32);
  const SensitivityMaps maps = gen_coil_maps(2, 4, 32, 32);
  const RealImage r = rss_combine(sense_expand(x, maps));
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      CHECK(r.at(i, j) == doctest::Approx(std::abs(x.at(i, j))).epsilon(1e-10));
}

TEST_CASE("sense_combine recovers x from expanded coils; zero stays zero") {
  Rng rng(23);
  const ComplexImage x = random_image(rng, 16, 16);
  const SensitivityMaps maps = gen_coil_maps(5, 3, 16, 16);
  const ComplexImage back = sense_combine(sense_expand(x, maps), maps);
  CHECK(max_diff(back.data, x.data) < 1e-12);

  CoilImages zero(3, 16, 16);
  const ComplexImage z = sense_combine(zero, maps);
  for (const auto& v : z.data) CHECK(v == cplx(0, 0));
}

TEST_CASE("sense_expand and sense_combine are mutual adjoints") {
  Rng rng(29);
  const SensitivityMaps maps = gen_coil_maps(7, 4, 16, 16);
  const ComplexImage x = random_image(rng, 16, 16);
  const CoilImages y = random_coils(rng, 4, 16, 16);

  const CoilImages ex = sense_expand(x, maps);
  const ComplexImage cy = sense_combine(y, maps);

  cplx lhs(0, 0), rhs(0, 0);
  for (size_t i = 0; i < ex.data.size(); ++i) lhs += ex.data[i] * std::conj(y.data[i]);
  for (size_t i = 0; i < cy.data.size(); ++i) rhs += x.data[i] * std::conj(cy.data[i]);
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("sense_expand with a single unit-magnitude coil phase-rotates x") {
  Rng rng(31);
  const ComplexImage x = random_image(rng, 16, 16);
  SensitivityMaps maps(1, 16, 16);
  for (auto& v : maps.data) v = std::polar(1.0, 0.3);
  const CoilImages y = sense_expand(x, maps);
  for (size_t i = 0; i < y.data.size(); ++i)
    CHECK(std::abs(y.data[i] - x.data[i] * std::polar(1.0, 0.3)) < 1e-12);
}

TEST_CASE("estimate_sens_maps") {
  SUBCASE("constant maps are recovered on the support") {
    const int n = 64, c = 4;
    const ComplexImage x = gen_phantom(5, n, n, 6);
    SensitivityMaps maps(c, n, n);
    for (auto& v : maps.data) v = cplx(1.0 / std::sqrt(static_cast<double>(c)), 0.0);
    const KSpace k = forward_acquire(x, maps);
    const SensitivityMaps est = estimate_sens_maps(k, 0.16);

    int support = 0;
    for (int r = 0; r < n; ++r)
      for (int cc = 0; cc < n; ++cc) {
        double s2 = 0;
        for (int ci = 0; ci < c; ++ci) s2 += std::norm(est.at(ci, r, cc));
        if (s2 == 0.0) continue;
        ++support;
        for (int ci = 0; ci < c; ++ci)
          CHECK(std::abs(est.at(ci, r, cc)) == doctest::Approx(0.5).epsilon(0.1));
      }
    CHECK(support > n * n / 8);  // the phantom interior is covered
  }
  SUBCASE("normalization invariant: sum of squares is 0 or 1") {
    const ComplexImage x = gen_phantom(9, 32, 32, 4);
    const SensitivityMaps maps = gen_coil_maps(9, 3, 32, 32);
    const SensitivityMaps est = estimate_sens_maps(forward_acquire(x, maps), 0.1);
    for (int r = 0; r < 32; ++r)
      for (int cc = 0; cc < 32; ++cc) {
        double s2 = 0;
        for (int ci = 0; ci < 3; ++ci) s2 += std::norm(est.at(ci, r, cc));
        CHECK((s2 == 0.0 || std::abs(s2 - 1.0) < 1e-6));
      }
  }
  SUBCASE("single coil gives unit magnitude on support") {
    const ComplexImage x = gen_phantom(2, 32, 32, 4);
    SensitivityMaps maps(1, 32, 32);
    for (auto& v : maps.data) v = cplx(1, 0);
    const SensitivityMaps est = estimate_sens_maps(forward_acquire(x, maps), 0.1);
    for (int r = 0; r < 32; ++r)
      for (int cc = 0; cc < 32; ++cc) {
        const double m = std::abs(est.at(0, r, cc));
        CHECK((m == 0.0 || std::abs(m - 1.0) < 1e-9));
      }
  }
}
