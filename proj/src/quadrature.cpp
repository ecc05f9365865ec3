#include "btbs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "btbs/model.hpp"
#include "btbs/rules.hpp"

namespace btbs {

namespace {

void validate_moment_args(const FieldConfig& cfg, const InitialData& f, int p, int j,
                          const MultiTime& t, const SpacePoint& x, bool allow_p1) {
  cfg.validate();
  if (t.size() != cfg.n) throw std::invalid_argument("moment: time dimension mismatch");
  if (x.dim() != cfg.d || f.dim() != cfg.d)
    throw std::invalid_argument("moment: space dimension mismatch");
  if (!t.interior()) throw std::invalid_argument("moment: t must be interior");
  if (p != 0 && p != 2 && !(allow_p1 && p == 1))
    throw std::invalid_argument("moment: unsupported power p");
  if (p > 0 && (j < 1 || j > cfg.n))
    throw std::invalid_argument("moment: p > 0 requires j in 1..n");
  if (cfg.n > 4) throw std::invalid_argument("moment: n > 4 not supported (tensor cost)");
}

// Tensor iteration over per-axis node lists; fixed index order so the
// compensated accumulation is deterministic.
template <typename Body>
void tensor_for(int n, int m, Body&& body) {
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    body(idx);
    int i = 0;
    for (; i < n; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < m) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
    if (i == n) break;
  }
}

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// u and scriptU^(j) at a single order: 2^n * half-line tensor quadrature with
// the Brownian-motion densities as weights. Truncated Gauss-Legendre per axis;
// the integrand is smooth on the closed half-line, so convergence is spectral.
double btbs_value_at_order(const FieldConfig& cfg, const InitialData& f, int p, int j,
                           const MultiTime& t, const SpacePoint& x, int order, double trunc) {
  const Rule& gl = gauss_legendre(order);
  int n = cfg.n;
  std::vector<std::vector<double>> s(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double T = trunc * std::sqrt(t[i]);
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      double si = 0.5 * T * (gl.nodes[k] + 1.0);
      double kb = std::exp(-si * si / (2.0 * t[i])) / std::sqrt(2.0 * M_PI * t[i]);
      s[static_cast<std::size_t>(i)].push_back(si);
      w[static_cast<std::size_t>(i)].push_back(gl.weights[k] * 0.5 * T * kb);
    }
  }
  Kahan acc;
  tensor_for(n, order, [&](const std::vector<int>& idx) {
    double wt = 1.0, prod = 1.0, wp = 1.0;
    for (int i = 0; i < n; ++i) {
      double si = s[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      wt *= w[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      prod *= si;
      if (p == 2 && i != j - 1) wp *= si * si;
    }
    acc.add(wt * wp * f.heat_smoothed(x, prod));
  });
  return std::ldexp(acc.sum, n);  // the 2^n half-line factor
}

std::complex<double> ks_value_at_order(const FieldConfig& cfg, const InitialData& f, int p, int j,
                                       const MultiTime& t, const SpacePoint& x, int order) {
  const Rule& gh = gauss_hermite_normal(order);
  int n = cfg.n;
  Kahan re, im;
  std::vector<double> s(static_cast<std::size_t>(n));
  tensor_for(n, order, [&](const std::vector<int>& idx) {
    double wt = 1.0, wp = 1.0;
    for (int i = 0; i < n; ++i) {
      double zi = gh.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      s[static_cast<std::size_t>(i)] = std::sqrt(t[i]) * zi;
      wt *= gh.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    for (int i = 0; i < n; ++i)
      if (i != j - 1)
        for (int q = 0; q < p; ++q) wp *= s[static_cast<std::size_t>(i)];
    double prod = 1.0, sum = 0.0;
    for (int i = 0; i < n; ++i) {
      prod *= s[static_cast<std::size_t>(i)];
      sum += s[static_cast<std::size_t>(i)];
    }
    std::complex<double> v;
    if (prod == 0.0) {
      // prod(s) = 0 only on a measure-zero set; the propagator integral of f
      // degenerates to f(x) there.
      v = f.value(x) * std::exp(std::complex<double>(0.0, sum));
    } else {
      v = std::exp(std::complex<double>(0.0, sum)) *
          f.complex_smoothed(x, std::complex<double>(0.0, prod));
    }
    re.add(wt * wp * v.real());
    im.add(wt * wp * v.imag());
  });
  return {re.sum, im.sum};
}

}  // namespace

int default_order([[maybe_unused]] const FieldConfig& cfg, const InitialData& f,
                  const MultiTime& t) {
  double tmax = 0.0, sq = 1.0;
  for (int i = 0; i < t.size(); ++i) {
    tmax = std::max(tmax, t[i]);
    sq *= std::sqrt(std::max(t[i], 0.0));
  }
  double lam = (f.kind() == InitialData::Kind::CosineProduct) ? f.theta_norm2() : 1.0;
  int order = static_cast<int>(std::ceil(10.0 * std::sqrt(tmax) * (1.0 + lam * sq)));
  return std::max(40, order);
}

RealQuadResult quad_btbs_moment(const FieldConfig& cfg, const InitialData& f, int p, int j,
                                const MultiTime& t, const SpacePoint& x, const QuadratureSpec& q) {
  validate_moment_args(cfg, f, p, j, t, x, /*allow_p1=*/false);
  q.validate();
  double fine = btbs_value_at_order(cfg, f, p, j, t, x, q.order, q.truncation);
  double coarse = btbs_value_at_order(cfg, f, p, j, t, x, (q.order + 1) / 2, q.truncation);
  RealQuadResult res{fine, std::abs(fine - coarse)};
  if (q.refinement_tol > 0.0 && res.error_estimate > q.refinement_tol)
    throw AccuracyError("quad_btbs_moment: refinement did not converge", coarse, fine);
  return res;
}

double btbs_boundary_values(const FieldConfig& cfg, const InitialData& f, int p, int j,
                            const MultiTime& t, const SpacePoint& x) {
  cfg.validate();
  if (t.size() != cfg.n) throw std::invalid_argument("btbs_boundary_values: dimension mismatch");
  if (!t.nonnegative()) throw std::invalid_argument("btbs_boundary_values: t must be >= 0");
  if (!t.on_boundary()) throw std::invalid_argument("btbs_boundary_values: t is interior");
  if (p == 0) return f.value(x);
  if (p != 2 || j < 1 || j > cfg.n)
    throw std::invalid_argument("btbs_boundary_values: p = 2 requires j in 1..n");
  for (int i = 0; i < cfg.n; ++i)
    if (i != j - 1 && t[i] == 0.0) return 0.0;  // t excluding j touches the boundary
  if (t[j - 1] != 0.0)
    throw std::invalid_argument("btbs_boundary_values: boundary case requires t_j = 0");
  return t.product_excluding(j) * f.value(x);
}

ComplexQuadResult quad_ks_moment(const FieldConfig& cfg, const InitialData& f, int p, int j,
                                 const MultiTime& t, const SpacePoint& x, const QuadratureSpec& q) {
  validate_moment_args(cfg, f, p, j, t, x, /*allow_p1=*/true);
  q.validate();
  std::complex<double> fine = ks_value_at_order(cfg, f, p, j, t, x, q.order);
  std::complex<double> coarse = ks_value_at_order(cfg, f, p, j, t, x, (q.order + 1) / 2);
  ComplexQuadResult res{fine, std::abs(fine - coarse)};
  if (q.refinement_tol > 0.0 && res.error_estimate > q.refinement_tol)
    throw AccuracyError("quad_ks_moment: refinement did not converge", coarse, fine);
  return res;
}

std::complex<double> ks_boundary_values(const FieldConfig& cfg, const InitialData& f, KsField which,
                                        int j, const std::vector<int>& I, const MultiTime& t,
                                        const SpacePoint& x) {
  cfg.validate();
  if (t.size() != cfg.n) throw std::invalid_argument("ks_boundary_values: dimension mismatch");
  if (I.empty()) throw std::invalid_argument("ks_boundary_values: I must be nonempty");
  std::vector<bool> in_I(static_cast<std::size_t>(cfg.n), false);
  for (int k : I) {
    if (k < 1 || k > cfg.n) throw std::invalid_argument("ks_boundary_values: axis out of range");
    if (in_I[static_cast<std::size_t>(k - 1)])
      throw std::invalid_argument("ks_boundary_values: repeated axis in I");
    in_I[static_cast<std::size_t>(k - 1)] = true;
  }

  if (which == KsField::U) {
    double sum = 0.0;
    for (int i = 0; i < cfg.n; ++i)
      if (!in_I[static_cast<std::size_t>(i)]) sum += t[i];
    return f.value(x) * std::exp(-0.5 * sum);
  }

  if (j < 1 || j > cfg.n) throw std::invalid_argument("ks_boundary_values: j required");
  bool is_single_j = (I.size() == 1 && I[0] == j);
  bool subset_of_complement = !in_I[static_cast<std::size_t>(j - 1)];
  if (!is_single_j && !subset_of_complement)
    throw std::invalid_argument("ks_boundary_values: I must be {j} or avoid j");
  if (!is_single_j) return {0.0, 0.0};

  std::complex<double> prod{1.0, 0.0};
  double sum = 0.0;
  for (int i = 0; i < cfg.n; ++i) {
    if (i == j - 1) continue;
    sum += t[i];
    if (which == KsField::U1)
      prod *= std::complex<double>(0.0, t[i]);
    else
      prod *= (t[i] - t[i] * t[i]);
  }
  return f.value(x) * prod * std::exp(-0.5 * sum);
}

ResidualReport commutation_check(const FieldConfig& cfg, const InitialData& f, int p, int j,
                                 const MultiTime& t, const SpacePoint& x, const QuadratureSpec& q,
                                 double h) {
  if (f.kind() == InitialData::Kind::GaussianBump)
    throw std::invalid_argument("commutation_check: cosine or constant data required");
  double lam = f.theta_norm2();  // 0 for constant
  bool ks = (cfg.family == Family::KS);

  std::function<std::complex<double>(const SpacePoint&)> field;
  if (ks) {
    field = [&](const SpacePoint& pt) { return quad_ks_moment(cfg, f, p, j, t, pt, q).value; };
  } else {
    field = [&](const SpacePoint& pt) {
      return std::complex<double>(quad_btbs_moment(cfg, f, p, j, t, pt, q).value, 0.0);
    };
  }

  // FD bilaplacian as the centered Laplacian composed twice.
  auto lap = [&](const SpacePoint& pt, auto&& g) {
    std::complex<double> acc = -2.0 * static_cast<double>(cfg.d) * g(pt);
    for (int k = 0; k < cfg.d; ++k) {
      SpacePoint pp = pt, pm = pt;
      pp[k] += h;
      pm[k] -= h;
      acc += g(pp) + g(pm);
    }
    return acc / (h * h);
  };
  std::complex<double> lhs = lap(x, [&](const SpacePoint& pt) { return lap(pt, field); });

  // Quadrature of the analytically bilaplaced integrand; for the built-in
  // cosine family that is lambda^2 times the original integrand.
  std::complex<double> rhs = lam * lam * field(x);

  ResidualReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.t = t;
  rep.x = x;
  rep.j = j;
  rep.stencil.h_space = h;
  rep.notes = "bilaplacian commutation";
  rep.finish();
  return rep;
}

}  // namespace btbs
