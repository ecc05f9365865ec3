#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "btbs/model.hpp"
#include "btbs/quadrature.hpp"
#include "btbs/sampler.hpp"

using namespace btbs;

namespace {

FieldConfig config(Family fam, int n, int d = 1) {
  FieldConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.family = fam;
  return cfg;
}

}  // namespace

TEST_CASE("uniform draws stay inside (0,1) and look uniform") {
  RngStream s{42, 0};
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double u = rng::uniform01(s, static_cast<std::uint64_t>(i), 0);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("normal draws have the right first moments") {
  RngStream s{7, 1};
  double m1 = 0.0, m2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double z = rng::normal(s, static_cast<std::uint64_t>(i), 0);
    m1 += z;
    m2 += z * z;
  }
  m1 /= n;
  m2 /= n;
  CHECK(m1 == doctest::Approx(0.0).epsilon(1.0));  // epsilon is relative; use abs margin below
  CHECK(std::abs(m1) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("Brownian-time draws match the half-normal mean") {
  MultiTime t({1.0, 4.0});
  RngStream s{11, 0};
  const int n = 200000;
  double mean1 = 0.0, mean2 = 0.0;
  for (int i = 0; i < n; ++i) {
    auto v = sample_brownian_times(t, s, static_cast<std::uint64_t>(i));
    mean1 += v[0];
    mean2 += v[1];
  }
  mean1 /= n;
  mean2 /= n;
  // E|B(t)| = sqrt(2 t / pi)
  CHECK(mean1 == doctest::Approx(0.7978845608028654).epsilon(8e-3));
  CHECK(mean2 == doctest::Approx(2.0 * 0.7978845608028654).epsilon(8e-3));
}

TEST_CASE("zero time components give exactly zero Brownian time") {
  MultiTime t({0.0, 2.0});
  RngStream s{3, 0};
  auto v = sample_brownian_times(t, s, 5);
  CHECK(v[0] == 0.0);
  CHECK(v[1] > 0.0);
}

TEST_CASE("Monte Carlo field estimate agrees with quadrature") {
  auto cfg = config(Family::BTBS, 1);
  auto f = InitialData::cosine_product({1.0});
  MultiTime t({1.0});
  SpacePoint x({0.0});
  QuadratureSpec q;
  double truth = quad_btbs_moment(cfg, f, 0, 0, t, x, q).value;
  auto e = mc_btbs_moment(cfg, f, 0, 0, t, x, 200000, RngStream{123, 0}, 2);
  CHECK(std::abs(e.value - truth) < 3.0 * e.std_error);
  CHECK(e.std_error > 0.0);
  CHECK(e.n_samples == 200000);
}

TEST_CASE("weighted moment agrees with quadrature") {
  auto cfg = config(Family::BTBS, 2);
  auto f = InitialData::cosine_product({1.0});
  MultiTime t({0.8, 1.2});
  SpacePoint x({0.1});
  QuadratureSpec q;
  double truth = quad_btbs_moment(cfg, f, 2, 1, t, x, q).value;
  auto e = mc_btbs_moment(cfg, f, 2, 1, t, x, 400000, RngStream{5, 0}, 2);
  CHECK(std::abs(e.value - truth) < 3.0 * e.std_error);
}

TEST_CASE("plain sheet estimate agrees with the closed form") {
  auto cfg = config(Family::BS, 2);
  auto f = InitialData::cosine_product({1.0});
  MultiTime t({1.0, 1.5});
  SpacePoint x({0.3});
  double truth = heat_expectation(f, t, x);
  auto e = mc_bs_moment(cfg, f, t, x, 200000, RngStream{9, 0}, 2);
  CHECK(std::abs(e.value - truth) < 3.0 * e.std_error);
}

TEST_CASE("estimates are deterministic and worker-count invariant") {
  auto cfg = config(Family::BTBS, 2);
  auto f = InitialData::cosine_product({1.0});
  MultiTime t({1.0, 1.0});
  SpacePoint x({0.0});
  auto a = mc_btbs_moment(cfg, f, 0, 0, t, x, 100000, RngStream{77, 3}, 1);
  auto b = mc_btbs_moment(cfg, f, 0, 0, t, x, 100000, RngStream{77, 3}, 4);
  auto c = mc_btbs_moment(cfg, f, 0, 0, t, x, 100000, RngStream{77, 3}, 7);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.value == c.value);
  // a different stream gives a different realization
  auto d = mc_btbs_moment(cfg, f, 0, 0, t, x, 100000, RngStream{77, 4}, 1);
  CHECK(a.value != d.value);
}

TEST_CASE("sheet grid sample vanishes on the boundary and has the sheet covariance") {
  auto cfg = config(Family::BS, 2, 1);
  std::vector<std::vector<double>> knots{{0.0, 0.5, 1.0}, {0.0, 1.0}};
  RngStream s{2024, 0};
  auto first = sample_sheet_grid(cfg, knots, s, 0);
  REQUIRE(first.shape == std::vector<int>{3, 2});
  // axis 0 fastest: flat = i0 + 3 * i1; boundary where any knot is 0
  for (int i0 = 0; i0 < 3; ++i0) CHECK(first.values[static_cast<std::size_t>(i0)] == 0.0);
  for (int i1 = 0; i1 < 2; ++i1) CHECK(first.values[static_cast<std::size_t>(3 * i1)] == 0.0);

  const int reps = 20000;
  double var_corner = 0.0, cov_half = 0.0;
  for (int r = 0; r < reps; ++r) {
    auto g = sample_sheet_grid(cfg, knots, s, static_cast<std::uint64_t>(r));
    double corner = g.values[2 + 3 * 1];  // t = (1, 1)
    double half = g.values[1 + 3 * 1];    // t = (0.5, 1)
    var_corner += corner * corner;
    cov_half += corner * half;
  }
  var_corner /= reps;
  cov_half /= reps;
  // covariance prod min(s_i, t_i): var at (1,1) is 1; cov((0.5,1),(1,1)) = 0.5
  CHECK(var_corner == doctest::Approx(1.0).epsilon(0.05));
  CHECK(cov_half == doctest::Approx(0.5).epsilon(0.08));
}

TEST_CASE("sheet grid sample is deterministic per realization index") {
  auto cfg = config(Family::BS, 2, 1);
  std::vector<std::vector<double>> knots{{0.0, 1.0}, {0.0, 1.0}};
  auto a = sample_sheet_grid(cfg, knots, RngStream{5, 0}, 3);
  auto b = sample_sheet_grid(cfg, knots, RngStream{5, 0}, 3);
  auto c = sample_sheet_grid(cfg, knots, RngStream{5, 0}, 4);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("martingale probe profile is flat for the sheet heat field") {
  auto cfg = config(Family::BS, 2, 1);
  auto f = InitialData::cosine_product({1.0});
  MultiTime t({1.0, 0.8});
  SpacePoint x({0.2});
  FieldEval u_eval = [&f](const MultiTime& tm, const SpacePoint& xp) {
    return heat_expectation(f, tm, xp);
  };
  std::vector<double> probes{0.0, 0.2, 0.4, 0.6, 0.8};
  auto prof = martingale_probe(cfg, u_eval, 1, t, x, probes, 50000, RngStream{31, 0}, 2);
  double base = heat_expectation(f, t, x);
  REQUIRE(prof.size() == probes.size());
  CHECK(prof[0].value == doctest::Approx(base).epsilon(1e-12));  // s = 0 is exact
  for (std::size_t i = 1; i < prof.size(); ++i)
    CHECK(std::abs(prof[i].value - base) < 3.0 * prof[i].std_error);
}
