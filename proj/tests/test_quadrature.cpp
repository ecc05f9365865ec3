#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "btbs/quadrature.hpp"
#include "btbs/rules.hpp"

using namespace btbs;

namespace {

FieldConfig config(Family fam, int n, int d = 1) {
  FieldConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.family = fam;
  return cfg;
}

// Closed form for the n = 1 field with cosine data: 2 e^{a^2 t/2} Phi(-a sqrt(t)) cos(theta x),
// a = theta^2 / 2; Phi is the standard normal CDF.
double n1_closed_form(double theta, double t, double x) {
  double a = theta * theta / 2.0;
  double phi = 0.5 * std::erfc(a * std::sqrt(t) / std::sqrt(2.0));
  return 2.0 * std::exp(a * a * t / 2.0) * phi * std::cos(theta * x);
}

}  // namespace

TEST_CASE("Gauss-Legendre exactness") {
  const Rule& r = gauss_legendre(8);
  for (int k = 0; k <= 15; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
      acc += r.weights[i] * std::pow(r.nodes[i], k);
    double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("Gauss-Hermite normal-weight moments") {
  const Rule& r = gauss_hermite_normal(20);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    m0 += r.weights[i];
    m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
    m4 += r.weights[i] * std::pow(r.nodes[i], 4);
  }
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("field moment n = 1 matches the closed form") {
  auto cfg = config(Family::BTBS, 1);
  auto f = InitialData::cosine_product({1.0});
  QuadratureSpec q;
  auto r = quad_btbs_moment(cfg, f, 0, 0, MultiTime({1.0}), SpacePoint({0.0}), q);
  CHECK(r.value == doctest::Approx(0.6992376694407961).epsilon(1e-10));
  CHECK(r.value == doctest::Approx(n1_closed_form(1.0, 1.0, 0.0)).epsilon(1e-10));
  CHECK(r.error_estimate < 1e-10);
}

TEST_CASE("constant data integrates to the constant") {
  auto cfg = config(Family::BTBS, 2);
  auto f = InitialData::constant(1.0, 1);
  QuadratureSpec q;
  auto r = quad_btbs_moment(cfg, f, 0, 0, MultiTime({0.9, 1.4}), SpacePoint({0.0}), q);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("second-moment weight reproduces E|B(t)|^2 = t") {
  auto cfg = config(Family::BTBS, 2);
  auto f = InitialData::constant(1.0, 1);
  QuadratureSpec q;
  auto r = quad_btbs_moment(cfg, f, 2, 1, MultiTime({0.7, 1.3}), SpacePoint({0.0}), q);
  CHECK(r.value == doctest::Approx(1.3).epsilon(1e-10));
}

TEST_CASE("p = 2 with n = 1 is an empty product") {
  auto cfg = config(Family::BTBS, 1);
  auto f = InitialData::cosine_product({1.0});
  QuadratureSpec q;
  MultiTime t({0.8});
  SpacePoint x({0.2});
  CHECK(quad_btbs_moment(cfg, f, 2, 1, t, x, q).value ==
        doctest::Approx(quad_btbs_moment(cfg, f, 0, 0, t, x, q).value).epsilon(1e-13));
}

TEST_CASE("separation of variables for cosine data") {
  auto cfg = config(Family::BTBS, 2);
  auto f = InitialData::cosine_product({1.1});
  QuadratureSpec q;
  MultiTime t({1.0, 0.6});
  double v1 = quad_btbs_moment(cfg, f, 0, 0, t, SpacePoint({0.3}), q).value;
  double v2 = quad_btbs_moment(cfg, f, 0, 0, t, SpacePoint({0.7}), q).value;
  CHECK(v1 / v2 == doctest::Approx(std::cos(1.1 * 0.3) / std::cos(1.1 * 0.7)).epsilon(1e-10));
}

TEST_CASE("boundary formulas") {
  auto cfg = config(Family::BTBS, 2);
  auto f = InitialData::cosine_product({1.0});
  SpacePoint x({0.0});
  // u on the boundary is f(x)
  CHECK(btbs_boundary_values(cfg, f, 0, 0, MultiTime({0.0, 3.0}), x) == f.value(x));
  // weighted field vanishes when an off-axis time is zero
  CHECK(btbs_boundary_values(cfg, f, 2, 1, MultiTime({5.0, 0.0}), x) == 0.0);
  // at t_j = 0 it equals prod_{i != j} t_i * f(x)
  CHECK(btbs_boundary_values(cfg, f, 2, 1, MultiTime({0.0, 3.0}), x) ==
        doctest::Approx(3.0 * f.value(x)).epsilon(1e-14));
  CHECK_THROWS_AS(btbs_boundary_values(cfg, f, 0, 0, MultiTime({1.0, 1.0}), x),
                  std::invalid_argument);
}

TEST_CASE("boundary continuity of the quadrature values") {
  auto cfg = config(Family::BTBS, 2);
  auto f = InitialData::cosine_product({1.0});
  QuadratureSpec q;
  SpacePoint x({0.2});
  double target = btbs_boundary_values(cfg, f, 0, 0, MultiTime({0.0, 1.0}), x);
  double eps = 1e-4;
  double near = quad_btbs_moment(cfg, f, 0, 0, MultiTime({eps, 1.0}), x, q).value;
  CHECK(near == doctest::Approx(target).epsilon(1e-2));
}

TEST_CASE("KS moment oracles") {
  auto cfg = config(Family::KS, 1);
  QuadratureSpec q;
  auto cosine = InitialData::cosine_product({1.0});
  auto r = quad_ks_moment(cfg, cosine, 0, 0, MultiTime({1.0}), SpacePoint({0.0}), q);
  CHECK(r.value.real() == doctest::Approx(std::exp(-0.125)).epsilon(1e-10));
  CHECK(std::abs(r.value.imag()) < 1e-10);

  auto constant = InitialData::constant(1.0, 1);
  auto rc = quad_ks_moment(cfg, constant, 0, 0, MultiTime({1.0}), SpacePoint({0.0}), q);
  CHECK(rc.value.real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
  CHECK(std::abs(rc.value.imag()) < 1e-10);
}

TEST_CASE("KS closed form across t and theta") {
  auto cfg = config(Family::KS, 1);
  QuadratureSpec q;
  for (double theta : {0.5, 1.0, 1.5})
    for (double t : {0.5, 1.0}) {
      auto f = InitialData::cosine_product({theta});
      double rate = 1.0 - theta * theta / 2.0;
      double expect = std::cos(theta * 0.3) * std::exp(-t * rate * rate / 2.0);
      auto r = quad_ks_moment(cfg, f, 0, 0, MultiTime({t}), SpacePoint({0.3}), q);
      CHECK(r.value.real() == doctest::Approx(expect).epsilon(1e-8));
      CHECK(std::abs(r.value.imag()) < 1e-8);
    }
}

TEST_CASE("KS moments with n = 1 coincide across p") {
  auto cfg = config(Family::KS, 1);
  auto f = InitialData::cosine_product({1.0});
  QuadratureSpec q;
  MultiTime t({0.9});
  SpacePoint x({0.1});
  auto p0 = quad_ks_moment(cfg, f, 0, 0, t, x, q).value;
  auto p1 = quad_ks_moment(cfg, f, 1, 1, t, x, q).value;
  auto p2 = quad_ks_moment(cfg, f, 2, 1, t, x, q).value;
  CHECK(std::abs(p0 - p1) < 1e-12);
  CHECK(std::abs(p0 - p2) < 1e-12);
}

TEST_CASE("KS temporal boundary closed forms") {
  auto cfg = config(Family::KS, 2);
  auto f = InitialData::constant(1.0, 1);
  SpacePoint x({0.0});
  MultiTime t({0.0, 2.0});
  // all axes pinned: u reduces to f(x)
  auto all = ks_boundary_values(cfg, f, KsField::U, 0, {1, 2}, MultiTime({0.0, 0.0}), x);
  CHECK(all.real() == doctest::Approx(1.0));
  CHECK(all.imag() == doctest::Approx(0.0));
  // first-power field at I = {j}: prod i t_k * exp(-sum t_k / 2)
  auto u1 = ks_boundary_values(cfg, f, KsField::U1, 1, {1}, t, x);
  CHECK(u1.real() == doctest::Approx(0.0));
  CHECK(u1.imag() == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-13));
  // second-power field at I = {j}: prod (t_k - t_k^2) * exp(-sum t_k / 2)
  auto u2 = ks_boundary_values(cfg, f, KsField::U2, 1, {1}, t, x);
  CHECK(u2.real() == doctest::Approx(-2.0 * std::exp(-1.0)).epsilon(1e-13));
  // weighted fields vanish when a weighted axis is pinned
  auto z = ks_boundary_values(cfg, f, KsField::U2, 1, {2}, t, x);
  CHECK(std::abs(z) == doctest::Approx(0.0));
}

TEST_CASE("differentiation under the integral") {
  QuadratureSpec q;
  q.order = 60;
  auto f = InitialData::cosine_product({1.0});
  auto rep = commutation_check(config(Family::BTBS, 2), f, 0, 0, MultiTime({1.0, 0.8}),
                               SpacePoint({0.2}), q, 1e-2);
  CHECK(rep.rel_residual < 1e-4);

  auto repc = commutation_check(config(Family::BTBS, 1), InitialData::constant(1.0, 1), 0, 0,
                                MultiTime({1.0}), SpacePoint({0.0}), q, 1e-2);
  CHECK(repc.abs_residual < 1e-8);

  auto repk = commutation_check(config(Family::KS, 1), f, 0, 0, MultiTime({1.0}),
                                SpacePoint({0.1}), q, 1e-2);
  CHECK(repk.rel_residual < 1e-4);
}

TEST_CASE("error estimates shrink under refinement") {
  auto cfg = config(Family::BTBS, 2);
  auto f = InitialData::cosine_product({1.0});
  MultiTime t({1.0, 1.0});
  SpacePoint x({0.0});
  QuadratureSpec lo, hi;
  lo.order = 20;
  hi.order = 40;
  auto rl = quad_btbs_moment(cfg, f, 0, 0, t, x, lo);
  auto rh = quad_btbs_moment(cfg, f, 0, 0, t, x, hi);
  CHECK(rh.error_estimate <= rl.error_estimate + 1e-15);
}

TEST_CASE("default order scales with frequency and has a floor") {
  auto f = InitialData::cosine_product({1.0});
  CHECK(default_order(config(Family::BTBS, 1), f, MultiTime({0.1})) >= 40);
  CHECK(default_order(config(Family::BTBS, 2), f, MultiTime({9.0, 9.0})) >
        default_order(config(Family::BTBS, 2), f, MultiTime({1.0, 1.0})));
}
