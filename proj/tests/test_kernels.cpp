#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "btbs/kernels.hpp"

using namespace btbs;

TEST_CASE("one-dimensional transition density oracle") {
  // (2 pi)^{-1/2} at t = 1, coincident points.
  CHECK(bm_kernel(1.0, 0.0, 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  // Normalization: integrates to 1 (midpoint scan).
  double acc = 0.0, h = 1e-3;
  for (double b = -10.0; b < 10.0; b += h) acc += bm_kernel(0.7, 0.2, b + h / 2) * h;
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("one-dimensional density satisfies the heat equation") {
  double h = 1e-4;
  for (double t : {0.5, 1.0, 2.0})
    for (double dx : {0.0, 0.4, 1.1}) {
      double dt = (bm_kernel(t + h, 0.0, dx) - bm_kernel(t - h, 0.0, dx)) / (2 * h);
      double dxx =
          (bm_kernel(t, 0.0, dx + h) - 2 * bm_kernel(t, 0.0, dx) + bm_kernel(t, 0.0, dx - h)) /
          (h * h);
      double res = std::abs(dt - 0.5 * dxx);
      CHECK(res / std::max({1.0, std::abs(dt)}) < 1e-6);
    }
}

TEST_CASE("sheet density oracle and time-derivative identity") {
  FieldConfig cfg;
  cfg.n = 2;
  cfg.d = 1;
  cfg.family = Family::BS;
  MultiTime t({2.0, 2.0});
  SpacePoint x({0.3}), y({0.3});
  // variance prod(t) = 4: (2 pi * 4)^{-1/2} = (8 pi)^{-1/2}
  CHECK(bs_kernel(cfg, t, x, y) == doctest::Approx(0.19947114020071635).epsilon(1e-14));

  for (int j = 1; j <= 2; ++j) {
    auto rep = bs_kernel_time_derivative_identity(cfg, MultiTime({1.3, 0.8}), x,
                                                  SpacePoint({0.9}), j);
    CHECK(rep.rel_residual < 1e-6);
  }
}

TEST_CASE("sheet density in higher dimension") {
  FieldConfig cfg;
  cfg.n = 3;
  cfg.d = 2;
  cfg.family = Family::BS;
  MultiTime t({1.0, 1.5, 2.0});
  SpacePoint x({0.1, -0.2}), y({0.5, 0.3});
  double v = 3.0, r2 = 0.4 * 0.4 + 0.5 * 0.5;
  double expect = std::exp(-r2 / (2 * v)) / (2 * M_PI * v);
  CHECK(bs_kernel(cfg, t, x, y) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("complex propagator principal branch oracle") {
  FieldConfig cfg;
  cfg.n = 1;
  cfg.d = 1;
  cfg.family = Family::KS;
  auto v = propagator(cfg, {1.0}, SpacePoint({0.0}), SpacePoint({0.0}));
  // (2 pi i)^{-1/2} = (2 pi)^{-1/2} e^{-i pi/4}
  CHECK(v.real() == doctest::Approx(0.28209479177387814).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(-0.28209479177387814).epsilon(1e-12));
}

TEST_CASE("propagator modulus") {
  FieldConfig cfg;
  cfg.n = 2;
  cfg.d = 2;
  cfg.family = Family::KS;
  std::vector<double> s{0.8, -1.2};
  auto v = propagator(cfg, s, SpacePoint({0.4, 0.0}), SpacePoint({-0.1, 0.7}));
  double expect = 1.0 / (2.0 * M_PI * std::abs(0.8 * -1.2));
  CHECK(std::abs(v) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("KS sheet kernel oracles, n = 1") {
  FieldConfig cfg;
  cfg.n = 1;
  cfg.d = 1;
  cfg.family = Family::KS;
  QuadratureSpec q;
  auto at_origin = kss_kernel(cfg, MultiTime({1.0}), 0.0, 0.0, q);
  CHECK(at_origin.value.real() == doctest::Approx(0.5686969383672851).epsilon(1e-10));
  CHECK(std::abs(at_origin.value.imag()) < 1e-10);

  auto offset = kss_kernel(cfg, MultiTime({0.5}), 1.0, 0.0, q);
  CHECK(offset.value.real() == doctest::Approx(0.16891699584624006).epsilon(1e-9));
}

TEST_CASE("KS sheet kernel n = 2 refinement is stable at coincident points") {
  FieldConfig cfg;
  cfg.n = 2;
  cfg.d = 1;
  cfg.family = Family::KS;
  QuadratureSpec q;
  q.order = 120;
  auto r = kss_kernel(cfg, MultiTime({1.0, 1.0}), 0.2, 0.2, q);
  CHECK(std::isfinite(r.value.real()));
  CHECK(std::isfinite(r.value.imag()));
  CHECK(r.error_estimate < 1e-6);
}
