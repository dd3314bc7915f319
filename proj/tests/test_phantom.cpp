#include <doctest.h>

#include <cmath>
#include <set>

#include "mri/kspace.hpp"
#include "mri/phantom.hpp"

using namespace mri;

TEST_CASE("gen_phantom is deterministic and normalized") {
  const ComplexImage a = gen_phantom(7, 64, 64, 6);
  const ComplexImage b = gen_phantom(7, 64, 64, 6);
  CHECK(a.data == b.data);  // bitwise

  double peak = 0;
  for (const auto& v : a.data) peak = std::max(peak, std::abs(v));
  CHECK(peak <= 1.0 + 1e-15);
  for (const auto& v : a.data) {
    CHECK(std::isfinite(v.real()));
    CHECK(std::isfinite(v.imag()));
  }
}

TEST_CASE("different seeds differ") {
  const ComplexImage a = gen_phantom(7, 64, 64, 6);
  const ComplexImage c = gen_phantom(8, 64, 64, 6);
  CHECK(a.data != c.data);
}

TEST_CASE("phantom is genuinely complex") {
  const ComplexImage a = gen_phantom(3, 32, 32, 5);
  double im = 0;
  for (const auto& v : a.data) im = std::max(im, std::abs(v.imag()));
  CHECK(im > 1e-3);
}

TEST_CASE("gen_phantom rejects tiny dimensions") {
  CHECK_THROWS_AS(gen_phantom(0, 15, 64, 3), config_error);
  CHECK_THROWS_AS(gen_phantom(0, 64, 8, 3), config_error);
  CHECK_THROWS_AS(gen_phantom(0, 64, 64, 0), config_error);
}

TEST_CASE("gen_coil_maps invariants") {
  SUBCASE("single coil has unit magnitude everywhere") {
    const SensitivityMaps m = gen_coil_maps(1, 1, 32, 32);
    for (const auto& v : m.data) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
  }
  SUBCASE("per-pixel sum of squared magnitudes is one") {
    const SensitivityMaps m = gen_coil_maps(5, 6, 48, 40);
    for (int r = 0; r < 48; ++r)
      for (int c = 0; c < 40; ++c) {
        double s2 = 0;
        for (int ci = 0; ci < 6; ++ci) s2 += std::norm(m.at(ci, r, c));
        CHECK(std::abs(s2 - 1.0) < 1e-6);
      }
  }
  SUBCASE("lobe maxima sit at distinct border positions") {
    const SensitivityMaps m = gen_coil_maps(3, 4, 64, 64);
    std::set<std::pair<int, int>> centers;
    for (int ci = 0; ci < 4; ++ci) {
      double best = -1;
      std::pair<int, int> arg{0, 0};
      for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c)
          if (std::abs(m.at(ci, r, c)) > best) {
            best = std::abs(m.at(ci, r, c));
            arg = {r, c};
          }
      centers.insert(arg);
    }
    CHECK(centers.size() == 4);
  }
  SUBCASE("determinism") {
    const SensitivityMaps a = gen_coil_maps(11, 4, 32, 32);
    const SensitivityMaps b = gen_coil_maps(11, 4, 32, 32);
    CHECK(a.data == b.data);
  }
  SUBCASE("rejects zero coils") { CHECK_THROWS_AS(gen_coil_maps(0, 0, 32, 32), config_error); }
}

TEST_CASE("forward_acquire of a centered impulse with a flat coil is flat") {
  ComplexImage x(16, 16);
  x.at(8, 8) = cplx(1, 0);
  SensitivityMaps maps(1, 16, 16);
  for (auto& v : maps.data) v = cplx(1, 0);
  const KSpace k = forward_acquire(x, maps);
  for (const auto& v : k.data)
    CHECK(std::abs(std::abs(v) - 1.0 / 16.0) < 1e-12);
}

TEST_CASE("forward_acquire of zero is zero") {
  ComplexImage x(16, 16);
  const SensitivityMaps maps = gen_coil_maps(1, 3, 16, 16);
  const KSpace k = forward_acquire(x, maps);
  for (const auto& v : k.data) CHECK(v == cplx(0, 0));
}

TEST_CASE("acquisition round trip and energy consistency") {
  const ComplexImage x = gen_phantom(21, 64, 64, 6);
  const SensitivityMaps maps = gen_coil_maps(22, 4, 64, 64);
  const KSpace k = forward_acquire(x, maps);

  // Parseval: ||k|| == ||S_c x||
  const CoilImages coils = sense_expand(x, maps);
  double nk = 0, nc = 0;
  for (const auto& v : k.data) nk += std::norm(v);
  for (const auto& v : coils.data) nc += std::norm(v);
  CHECK(std::abs(std::sqrt(nk) - std::sqrt(nc)) < 1e-10);

  const ComplexImage back = sense_combine(ifft2c(k), maps);
  double err = 0;
  for (size_t i = 0; i < back.data.size(); ++i)
    err = std::max(err, std::abs(back.data[i] - x.data[i]));
  CHECK(err < 1e-10);
}

TEST_CASE("forward_acquire rejects shape mismatch") {
  const ComplexImage x = gen_phantom(1, 32, 32, 3);
  const SensitivityMaps maps = gen_coil_maps(1, 2, 16, 16);
  CHECK_THROWS_AS(forward_acquire(x, maps), shape_error);
}
