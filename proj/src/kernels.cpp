#include "btbs/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "btbs/rules.hpp"

namespace btbs {

double bm_kernel(double t, double a, double b) {
  if (!(t > 0.0)) throw std::invalid_argument("bm_kernel: t must be > 0");
  double d = b - a;
  return std::exp(-d * d / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
}

double bs_kernel(const FieldConfig& cfg, const MultiTime& t, const SpacePoint& x,
                 const SpacePoint& y) {
  cfg.validate();
  if (t.size() != cfg.n) throw std::invalid_argument("bs_kernel: time dimension mismatch");
  if (x.dim() != cfg.d || y.dim() != cfg.d)
    throw std::invalid_argument("bs_kernel: space dimension mismatch");
  if (!t.interior()) throw std::invalid_argument("bs_kernel: t must be interior");
  double p = t.product();
  double r2 = 0.0;
  for (int k = 0; k < cfg.d; ++k) {
    double dk = x[k] - y[k];
    r2 += dk * dk;
  }
  return std::exp(-r2 / (2.0 * p)) / std::pow(2.0 * M_PI * p, 0.5 * cfg.d);
}

ResidualReport bs_kernel_time_derivative_identity(const FieldConfig& cfg, const MultiTime& t,
                                                  const SpacePoint& x, const SpacePoint& y, int j,
                                                  double h) {
  if (j < 1 || j > cfg.n) throw std::invalid_argument("bs_kernel_time_derivative_identity: bad j");
  if (!t.interior() || t[j - 1] <= h)
    throw std::invalid_argument("bs_kernel_time_derivative_identity: t must be interior");

  MultiTime tp = t, tm = t;
  tp[j - 1] += h;
  tm[j - 1] -= h;
  double lhs = (bs_kernel(cfg, tp, x, y) - bs_kernel(cfg, tm, x, y)) / (2.0 * h);

  // Delta_x of the Gaussian: K * (|x-y|^2 / P^2 - d / P), P = prod t_i.
  double P = t.product();
  double r2 = 0.0;
  for (int k = 0; k < cfg.d; ++k) {
    double dk = x[k] - y[k];
    r2 += dk * dk;
  }
  double lap = bs_kernel(cfg, t, x, y) * (r2 / (P * P) - cfg.d / P);
  double rhs = 0.5 * t.product_excluding(j) * lap;

  ResidualReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.t = t;
  rep.x = x;
  rep.j = j;
  rep.stencil.h_time = h;
  rep.finish();
  return rep;
}

std::complex<double> propagator(const FieldConfig& cfg, const std::vector<double>& s,
                                const SpacePoint& x, const SpacePoint& y) {
  cfg.validate();
  if (x.dim() != cfg.d || y.dim() != cfg.d)
    throw std::invalid_argument("propagator: space dimension mismatch");
  double prod = 1.0;
  for (double si : s) prod *= si;
  if (prod == 0.0) throw std::invalid_argument("propagator: singular (prod s = 0)");
  double r2 = 0.0;
  for (int k = 0; k < cfg.d; ++k) {
    double dk = x[k] - y[k];
    r2 += dk * dk;
  }
  // exp(-r^2 / (2 i P)) = exp(i r^2 / (2 P)); principal branch for the power.
  std::complex<double> phase = std::exp(std::complex<double>(0.0, r2 / (2.0 * prod)));
  std::complex<double> denom =
      std::pow(std::complex<double>(0.0, 2.0 * M_PI * prod), 0.5 * cfg.d);
  return phase / denom;
}

namespace {

// n = 1 route: Fourier-space form of the kernel,
//   K(t; x, y) = (1/2 pi) int exp(i xi (x-y)) exp(-t (1 - xi^2/2)^2 / 2) d xi.
// The integrand is entire with quartic-exponential decay, so truncated
// Gauss-Legendre converges spectrally for every x, y.
std::complex<double> kss_n1_fourier(double t, double dx, int order) {
  // exp(-t (xi^2/2 - 1)^2 / 2) < 1e-18 beyond the cutoff.
  double X = std::sqrt(2.0 * (1.0 + std::sqrt(2.0 * 41.5 / t)));
  const Rule& gl = gauss_legendre(order);
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double xi = X * gl.nodes[i];
    double g = std::exp(-0.5 * t * (1.0 - 0.5 * xi * xi) * (1.0 - 0.5 * xi * xi));
    acc += gl.weights[i] * X * g * std::exp(std::complex<double>(0.0, xi * dx));
  }
  return acc / (2.0 * M_PI);
}

// n >= 2 route: per-axis substitution s_i = sign * z_i^2 on each orthant,
// which absorbs the |prod s|^{-1/2} amplitude into the Jacobian. Convergence
// is refinement-checked; the oscillatory essential singularity at x != y can
// defeat it, in which case the caller sees an AccuracyError.
std::complex<double> kss_orthant_quad(const MultiTime& t, double dx, int order, double trunc) {
  int n = t.size();
  const Rule& gl = gauss_legendre(order);
  std::vector<std::vector<double>> z(static_cast<std::size_t>(n)),
      w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double Z = std::sqrt(trunc * std::sqrt(t[i]));
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      double zi = 0.5 * Z * (gl.nodes[k] + 1.0);
      z[static_cast<std::size_t>(i)].push_back(zi);
      double s = zi * zi;
      // weight: K^BM(t_i; 0, s) * jacobian 2 z_i
      double kb = std::exp(-s * s / (2.0 * t[i])) / std::sqrt(2.0 * M_PI * t[i]);
      w[static_cast<std::size_t>(i)].push_back(gl.weights[k] * 0.5 * Z * kb * 2.0 * zi);
    }
  }
  std::complex<double> total{0.0, 0.0};
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  int m = static_cast<int>(gl.nodes.size());
  for (int orth = 0; orth < (1 << n); ++orth) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      double sum = 0.0, prod = 1.0, wt = 1.0;
      for (int i = 0; i < n; ++i) {
        double zi = z[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        double s = ((orth >> i) & 1) ? -zi * zi : zi * zi;
        sum += s;
        prod *= s;
        wt *= w[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      }
      std::complex<double> p =
          std::exp(std::complex<double>(0.0, dx * dx / (2.0 * prod))) /
          std::sqrt(std::complex<double>(0.0, 2.0 * M_PI * prod));
      total += wt * std::exp(std::complex<double>(0.0, sum)) * p;
      int i = 0;
      for (; i < n; ++i) {
        if (++idx[static_cast<std::size_t>(i)] < m) break;
        idx[static_cast<std::size_t>(i)] = 0;
      }
      if (i == n) break;
    }
  }
  return total;
}

}  // namespace

ComplexQuadResult kss_kernel(const FieldConfig& cfg, const MultiTime& t, double x, double y,
                             const QuadratureSpec& q) {
  cfg.validate();
  q.validate();
  if (cfg.d != 1)
    throw std::invalid_argument("kss_kernel: only d = 1 is supported for direct evaluation");
  if (t.size() != cfg.n) throw std::invalid_argument("kss_kernel: time dimension mismatch");
  if (!t.interior()) throw std::invalid_argument("kss_kernel: t must be interior");

  double dx = x - y;
  int coarse_order = (q.order + 1) / 2;
  std::complex<double> fine, coarse;
  if (cfg.n == 1) {
    fine = kss_n1_fourier(t[0], dx, q.order);
    coarse = kss_n1_fourier(t[0], dx, coarse_order);
  } else {
    fine = kss_orthant_quad(t, dx, q.order, q.truncation);
    coarse = kss_orthant_quad(t, dx, coarse_order, q.truncation);
  }
  ComplexQuadResult res{fine, std::abs(fine - coarse)};
  if (q.refinement_tol > 0.0 && res.error_estimate > q.refinement_tol)
    throw AccuracyError("kss_kernel: refinement did not converge", coarse, fine);
  return res;
}

}  // namespace btbs
