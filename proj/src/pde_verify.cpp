#include "btbs/pde_verify.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "btbs/model.hpp"

namespace btbs {

namespace {

// Per-axis 1-D difference described as offsets plus weights.
struct AxisDiff {
  std::vector<double> offsets;
  std::vector<double> weights;
};

AxisDiff central_first(double h) { return {{h, -h}, {1.0 / (2.0 * h), -1.0 / (2.0 * h)}}; }
AxisDiff forward_first(double h) { return {{h, 0.0}, {1.0 / h, -1.0 / h}}; }

std::complex<double> time_derivative(const ComplexFieldEval& field, const std::vector<int>& axes,
                                     const MultiTime& t, const SpacePoint& x, double h,
                                     std::string* note) {
  std::vector<AxisDiff> diffs;
  for (int j : axes) {
    if (t[j - 1] - h > 0.0) {
      diffs.push_back(central_first(h));
    } else {
      diffs.push_back(forward_first(h));
      if (note) *note += "forward difference on t_" + std::to_string(j) + "; ";
    }
  }
  std::complex<double> acc{0.0, 0.0};
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    MultiTime tt = t;
    double w = 1.0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      tt[axes[a] - 1] += diffs[a].offsets[idx[a]];
      w *= diffs[a].weights[idx[a]];
    }
    acc += w * field(tt, x);
    std::size_t a = 0;
    for (; a < axes.size(); ++a) {
      if (++idx[a] < diffs[a].offsets.size()) break;
      idx[a] = 0;
    }
    if (a == axes.size()) break;
  }
  return acc;
}

std::complex<double> fd_laplacian(const ComplexFieldEval& field, const MultiTime& t,
                                  const SpacePoint& x, double h) {
  int d = x.dim();
  std::complex<double> acc = -2.0 * static_cast<double>(d) * field(t, x);
  for (int k = 0; k < d; ++k) {
    SpacePoint xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    acc += field(t, xp) + field(t, xm);
  }
  return acc / (h * h);
}

// Closed-form helpers for the Brownian-sheet field u(t, x) = E f(W^x(t)):
// derivative in the variance v = prod(t) and spatial Laplacian, evaluated from
// the smoothed closed forms (independent code paths, no FD).
double smoothed_dv(const InitialData& f, const SpacePoint& x, double v) {
  switch (f.kind()) {
    case InitialData::Kind::CosineProduct:
      return -0.5 * f.theta_norm2() * f.heat_smoothed(x, v);
    case InitialData::Kind::Constant:
      return 0.0;
    case InitialData::Kind::GaussianBump: {
      double w2 = f.scalar_param() * f.scalar_param();
      double s2 = w2 + v;
      double r2 = 0.0;
      for (int k = 0; k < x.dim(); ++k) {
        double dk = x[k] - f.vector_param()[static_cast<std::size_t>(k)];
        r2 += dk * dk;
      }
      return f.heat_smoothed(x, v) * 0.5 * (r2 / (s2 * s2) - x.dim() / s2);
    }
  }
  return 0.0;
}

double smoothed_lap(const InitialData& f, const SpacePoint& x, double v) {
  switch (f.kind()) {
    case InitialData::Kind::CosineProduct:
      return -f.theta_norm2() * f.heat_smoothed(x, v);
    case InitialData::Kind::Constant:
      return 0.0;
    case InitialData::Kind::GaussianBump: {
      double w2 = f.scalar_param() * f.scalar_param();
      double s2 = w2 + v;
      double r2 = 0.0;
      for (int k = 0; k < x.dim(); ++k) {
        double dk = x[k] - f.vector_param()[static_cast<std::size_t>(k)];
        r2 += dk * dk;
      }
      return f.heat_smoothed(x, v) * (r2 / (s2 * s2) - x.dim() / s2);
    }
  }
  return 0.0;
}

ComplexFieldEval heat_field(const InitialData& f) {
  return [&f](const MultiTime& t, const SpacePoint& x) {
    return std::complex<double>(heat_expectation(f, t, x), 0.0);
  };
}

double require_eigenvalue(const InitialData& f, const char* who) {
  if (f.kind() == InitialData::Kind::GaussianBump)
    throw std::invalid_argument(std::string(who) + ": cosine or constant data required");
  return f.theta_norm2();
}

}  // namespace

std::complex<double> fd_apply(const ComplexFieldEval& field, FdKind kind, int j,
                              const MultiTime& t, const SpacePoint& x, const StencilSpec& s,
                              std::string* note) {
  switch (kind) {
    case FdKind::DtJ: {
      if (j < 1 || j > t.size()) throw std::invalid_argument("fd_apply: bad time axis");
      return time_derivative(field, {j}, t, x, s.h_time, note);
    }
    case FdKind::MixedDtAll: {
      std::vector<int> axes(static_cast<std::size_t>(t.size()));
      std::iota(axes.begin(), axes.end(), 1);
      return time_derivative(field, axes, t, x, s.h_time, note);
    }
    case FdKind::Laplacian:
      return fd_laplacian(field, t, x, s.h_space);
    case FdKind::Bilaplacian: {
      auto lap = [&](const MultiTime& tt, const SpacePoint& xx) {
        return fd_laplacian(field, tt, xx, s.h_space);
      };
      return fd_laplacian(lap, t, x, s.h_space);
    }
  }
  throw std::invalid_argument("fd_apply: unknown kind");
}

std::vector<std::vector<int>> enumerate_Sn(int n) {
  if (n < 2) throw std::invalid_argument("enumerate_Sn: defined for n >= 2 (empty for n = 1)");
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> tup(static_cast<std::size_t>(n));
    int sum = 0;
    for (int i = 0; i < n; ++i) {
      tup[static_cast<std::size_t>(i)] = ((mask >> i) & 1) ? 2 : 1;
      sum += tup[static_cast<std::size_t>(i)];
    }
    if (sum >= n + 1 && sum <= 2 * n - 1) out.push_back(std::move(tup));
  }
  return out;
}

double cross_term_coefficient(int n, int j, const MultiTime& t) {
  if (j < 1 || j > n) throw std::invalid_argument("cross_term_coefficient: bad j");
  if (t[j - 1] == 0.0) throw std::invalid_argument("cross_term_coefficient: singular at t_j = 0");
  return std::sqrt(t.product_excluding(j) /
                   (std::pow(2.0, 4 - n) * std::pow(M_PI, n) * t[j - 1]));
}

double cross_term_T(const FieldConfig& cfg, const InitialData& f, int k, int j,
                    const MultiTime& t, const SpacePoint& x, const ComplexFieldEval* scriptU,
                    const StencilSpec& s, SpatialRoute route) {
  if (k == 1) return cross_term_coefficient(cfg.n, j, t) * f.laplacian(x);
  if (k != 2) throw std::invalid_argument("cross_term_T: k must be 1 or 2");
  if (!scriptU) throw std::invalid_argument("cross_term_T: scriptU field required for k = 2");
  if (route == SpatialRoute::AnalyticEigen) {
    double lam = require_eigenvalue(f, "cross_term_T");
    return 0.125 * lam * lam * (*scriptU)(t, x).real();
  }
  return 0.125 * fd_apply(*scriptU, FdKind::Bilaplacian, 0, t, x, s).real();
}

ResidualReport residual_btbs_system(const FieldConfig& cfg, const InitialData& f, int j,
                                    const MultiTime& t, const SpacePoint& x,
                                    const ComplexFieldEval& u_field,
                                    const ComplexFieldEval& scriptU_field, const StencilSpec& s,
                                    SpatialRoute route) {
  cfg.validate();
  if (!t.interior()) throw std::invalid_argument("residual_btbs_system: t must be interior");
  ResidualReport rep;
  rep.stencil = s;
  rep.t = t;
  rep.x = x;
  rep.j = j;
  rep.lhs = fd_apply(u_field, FdKind::DtJ, j, t, x, s, &rep.notes);
  double rhs = cross_term_T(cfg, f, 1, j, t, x, nullptr, s, route) +
               cross_term_T(cfg, f, 2, j, t, x, &scriptU_field, s, route);
  rep.rhs = rhs;
  rep.finish();
  return rep;
}

ResidualReport residual_btbs_nonlinear(const FieldConfig& cfg, const InitialData& f,
                                       const MultiTime& t, const SpacePoint& x,
                                       const ComplexFieldEval& u_field,
                                       const std::vector<ComplexFieldEval>& scriptU_fields,
                                       const StencilSpec& s, SpatialRoute route) {
  cfg.validate();
  int n = cfg.n;
  if (static_cast<int>(scriptU_fields.size()) != n)
    throw std::invalid_argument("residual_btbs_nonlinear: one scriptU field per axis required");
  if (!t.interior()) throw std::invalid_argument("residual_btbs_nonlinear: t must be interior");

  ResidualReport rep;
  rep.stencil = s;
  rep.t = t;
  rep.x = x;

  std::complex<double> lhs{1.0, 0.0};
  for (int j = 1; j <= n; ++j) lhs *= fd_apply(u_field, FdKind::DtJ, j, t, x, s, &rep.notes);
  rep.lhs = lhs;

  double lead = std::sqrt(std::pow(t.product(), n - 2) /
                          (std::pow(2.0, 4 * n - n * n) * std::pow(M_PI, n * n))) *
                std::pow(f.laplacian(x), n);

  std::vector<double> bilapU(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    if (route == SpatialRoute::AnalyticEigen) {
      double lam = require_eigenvalue(f, "residual_btbs_nonlinear");
      bilapU[static_cast<std::size_t>(j - 1)] =
          lam * lam * scriptU_fields[static_cast<std::size_t>(j - 1)](t, x).real();
    } else {
      bilapU[static_cast<std::size_t>(j - 1)] =
          fd_apply(scriptU_fields[static_cast<std::size_t>(j - 1)], FdKind::Bilaplacian, 0, t, x, s)
              .real();
    }
  }
  double prod_term = std::pow(8.0, -n);
  for (double b : bilapU) prod_term *= b;

  double cross = 0.0;
  if (n >= 2) {
    for (const auto& tup : enumerate_Sn(n)) {
      double term = 1.0;
      for (int j = 1; j <= n; ++j) {
        if (tup[static_cast<std::size_t>(j - 1)] == 1)
          term *= cross_term_coefficient(n, j, t) * f.laplacian(x);
        else
          term *= 0.125 * bilapU[static_cast<std::size_t>(j - 1)];
      }
      cross += term;
    }
  }
  rep.rhs = lead + prod_term + cross;
  rep.finish();
  return rep;
}

ResidualReport residual_bs_system(const FieldConfig& cfg, const InitialData& f, int j,
                                  const MultiTime& t, const SpacePoint& x, const StencilSpec& s,
                                  TimeRoute route) {
  cfg.validate();
  if (j < 1 || j > cfg.n) throw std::invalid_argument("residual_bs_system: bad j");
  if (!t.interior()) throw std::invalid_argument("residual_bs_system: t must be interior");
  ResidualReport rep;
  rep.stencil = s;
  rep.t = t;
  rep.x = x;
  rep.j = j;
  double pnj = t.product_excluding(j);
  if (route == TimeRoute::Analytic) {
    rep.lhs = smoothed_dv(f, x, t.product()) * pnj;
    rep.rhs = 0.5 * pnj * smoothed_lap(f, x, t.product());
  } else {
    auto u = heat_field(f);
    rep.lhs = fd_apply(u, FdKind::DtJ, j, t, x, s, &rep.notes);
    rep.rhs = 0.5 * pnj * fd_apply(u, FdKind::Laplacian, 0, t, x, s);
  }
  rep.finish();
  return rep;
}

ResidualReport residual_bs_nonlinear(const FieldConfig& cfg, const InitialData& f,
                                     const MultiTime& t, const SpacePoint& x, const StencilSpec& s,
                                     TimeRoute route) {
  cfg.validate();
  if (!t.interior()) throw std::invalid_argument("residual_bs_nonlinear: t must be interior");
  int n = cfg.n;
  ResidualReport rep;
  rep.stencil = s;
  rep.t = t;
  rep.x = x;
  double v = t.product();
  if (route == TimeRoute::Analytic) {
    std::complex<double> lhs{1.0, 0.0};
    for (int j = 1; j <= n; ++j) lhs *= smoothed_dv(f, x, v) * t.product_excluding(j);
    rep.lhs = lhs;
    rep.rhs = std::pow(v, n - 1) / std::pow(2.0, n) * std::pow(smoothed_lap(f, x, v), n);
  } else {
    auto u = heat_field(f);
    std::complex<double> lhs{1.0, 0.0};
    for (int j = 1; j <= n; ++j) lhs *= fd_apply(u, FdKind::DtJ, j, t, x, s, &rep.notes);
    rep.lhs = lhs;
    rep.rhs = std::pow(v, n - 1) / std::pow(2.0, n) *
              std::pow(fd_apply(u, FdKind::Laplacian, 0, t, x, s), n);
  }
  rep.finish();
  return rep;
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}

namespace {

void poly_add(TimePoly& p, const std::vector<int>& mono, const Rational& c) {
  auto it = p.find(mono);
  if (it == p.end()) {
    if (c.num != 0) p.emplace(mono, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.num == 0) p.erase(it);
}

// Monomial (1/2) * prod_{i != skip} t_i, exponents sized n.
std::pair<std::vector<int>, Rational> half_product_excluding(int n, int skip) {
  std::vector<int> e(static_cast<std::size_t>(n), 1);
  e[static_cast<std::size_t>(skip - 1)] = 0;
  return {e, Rational(1, 2)};
}

}  // namespace

std::vector<TimePoly> ln_operator(int n) {
  if (n < 1) throw std::invalid_argument("ln_operator: n must be >= 1");
  // D_1 = (1/2) prod_{i != 1} t_i * Delta u
  std::vector<TimePoly> coeffs(1);
  {
    auto [mono, c] = half_product_excluding(n, 1);
    poly_add(coeffs[0], mono, c);
  }
  for (int m = 2; m <= n; ++m) {
    std::vector<TimePoly> next(coeffs.size() + 1);
    auto [prod_mono, half] = half_product_excluding(n, m);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      for (const auto& [mono, c] : coeffs[k]) {
        // d/dt_m of the monomial
        int e = mono[static_cast<std::size_t>(m - 1)];
        if (e > 0) {
          std::vector<int> dm = mono;
          dm[static_cast<std::size_t>(m - 1)] = e - 1;
          poly_add(next[k], dm, c * Rational(e));
        }
        // c * (1/2) prod_{i != m} t_i shifts Delta^k to Delta^{k+1}
        std::vector<int> pm = mono;
        for (int i = 0; i < n; ++i)
          pm[static_cast<std::size_t>(i)] += prod_mono[static_cast<std::size_t>(i)];
        poly_add(next[k + 1], pm, c * half);
      }
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

std::vector<TimePoly> ln_operator_table(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("ln_operator_table: printed rows cover n <= 4");
  auto mono = [n](int upto, int power) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < upto; ++i) e[static_cast<std::size_t>(i)] = power;
    return e;
  };
  std::vector<TimePoly> c(static_cast<std::size_t>(n));
  c[0][mono(0, 0)] = Rational(1, 2);
  if (n == 2) c[1][mono(2, 1)] = Rational(1, 4);
  if (n == 3) {
    c[1][mono(3, 1)] = Rational(3, 4);
    c[2][mono(3, 2)] = Rational(1, 8);
  }
  if (n == 4) {
    // As printed: only t_1 t_2 t_3 appears.
    c[1][mono(3, 1)] = Rational(8, 4);
    c[2][mono(3, 2)] = Rational(5, 8);
    c[3][mono(3, 3)] = Rational(1, 16);
  }
  return c;
}

double eval_time_poly(const TimePoly& p, const MultiTime& t) {
  double acc = 0.0;
  for (const auto& [mono, c] : p) {
    double term = c.to_double();
    for (std::size_t i = 0; i < mono.size(); ++i)
      for (int e = 0; e < mono[i]; ++e) term *= t[static_cast<int>(i)];
    acc += term;
  }
  return acc;
}

std::string time_poly_to_string(const TimePoly& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : p) {
    if (!first) os << " + ";
    first = false;
    os << c.num;
    if (c.den != 1) os << "/" << c.den;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      if (mono[i] == 0) continue;
      os << "*t" << (i + 1);
      if (mono[i] > 1) os << "^" << mono[i];
    }
  }
  return os.str();
}

ResidualReport residual_bs_2n(const FieldConfig& cfg, const InitialData& f, const MultiTime& t,
                              const SpacePoint& x, const StencilSpec& s, LnSource source) {
  cfg.validate();
  if (!t.interior()) throw std::invalid_argument("residual_bs_2n: t must be interior");
  double lam = require_eigenvalue(f, "residual_bs_2n");
  ResidualReport rep;
  rep.stencil = s;
  rep.t = t;
  rep.x = x;
  rep.lhs = fd_apply(heat_field(f), FdKind::MixedDtAll, 0, t, x, s, &rep.notes);
  auto coeffs = (source == LnSource::Recursion) ? ln_operator(cfg.n) : ln_operator_table(cfg.n);
  double u = heat_expectation(f, t, x);
  double rhs = 0.0, eig = 1.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    eig *= -lam;  // Delta^{k+1} u = (-lambda)^{k+1} u for cosine data
    rhs += eval_time_poly(coeffs[k], t) * eig * u;
  }
  rep.rhs = rhs;
  rep.finish();
  return rep;
}

ResidualReport residual_ks_system(const FieldConfig& cfg, const InitialData& f, int j,
                                  const MultiTime& t, const SpacePoint& x,
                                  const ComplexFieldEval& u_field, const ComplexFieldEval& U1_field,
                                  const ComplexFieldEval& U2_field, const StencilSpec& s) {
  cfg.validate();
  if (!t.interior()) throw std::invalid_argument("residual_ks_system: t must be interior");
  double lam = require_eigenvalue(f, "residual_ks_system");
  ResidualReport rep;
  rep.stencil = s;
  rep.t = t;
  rep.x = x;
  rep.j = j;
  rep.lhs = fd_apply(u_field, FdKind::DtJ, j, t, x, s, &rep.notes);
  // -1/8 Delta^2 scriptU - 1/2 Delta U - 1/2 u with the eigen reduction.
  rep.rhs = -0.125 * lam * lam * U2_field(t, x) + 0.5 * lam * U1_field(t, x) - 0.5 * u_field(t, x);
  rep.finish();
  return rep;
}

}  // namespace btbs
