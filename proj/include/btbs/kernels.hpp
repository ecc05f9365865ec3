#pragma once

#include <complex>

#include "btbs/quadrature.hpp"
#include "btbs/types.hpp"

namespace btbs {

// One-dimensional Brownian transition density (2 pi t)^{-1/2} exp(-(b-a)^2/2t).
double bm_kernel(double t, double a, double b);

// Brownian sheet transition density with per-coordinate variance prod(t_i).
double bs_kernel(const FieldConfig& cfg, const MultiTime& t, const SpacePoint& x,
                 const SpacePoint& y);

// dK/dt_j versus (1/2) (prod_{i != j} t_i) Delta_x K, the latter analytic.
ResidualReport bs_kernel_time_derivative_identity(const FieldConfig& cfg, const MultiTime& t,
                                                  const SpacePoint& x, const SpacePoint& y, int j,
                                                  double h = 1e-4);

// Complex Gaussian propagator with effective time i * prod(s), principal branch.
std::complex<double> propagator(const FieldConfig& cfg, const std::vector<double>& s,
                                const SpacePoint& x, const SpacePoint& y);

// Kuramoto-Sivashinsky sheet kernel, d = 1 only.
ComplexQuadResult kss_kernel(const FieldConfig& cfg, const MultiTime& t, double x, double y,
                             const QuadratureSpec& q);

}  // namespace btbs
