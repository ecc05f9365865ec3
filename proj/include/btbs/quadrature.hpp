#pragma once

#include <complex>

#include "btbs/initial_data.hpp"
#include "btbs/types.hpp"

namespace btbs {

struct QuadratureSpec {
  enum class Scheme { GaussTensor, Adaptive };
  Scheme scheme = Scheme::GaussTensor;
  int order = 80;             // per axis
  double truncation = 8.5;    // half-width in units of sqrt(t_i)
  double refinement_tol = 0;  // 0 disables the refinement check

  void validate() const {
    if (order < 2) throw std::invalid_argument("QuadratureSpec: order must be >= 2");
    if (!(truncation > 0.0)) throw std::invalid_argument("QuadratureSpec: truncation must be > 0");
  }
};

struct RealQuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

struct ComplexQuadResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
};

// Per-axis order matched to the oscillation frequency after the s_i =
// sqrt(t_i) z_i scaling, floored at 40.
int default_order(const FieldConfig& cfg, const InitialData& f, const MultiTime& t);

// BTBS field moments from the half-line integral representation:
//   p = 0: u(t, x);  p = 2 with j: scriptU^(j)(t, x).
RealQuadResult quad_btbs_moment(const FieldConfig& cfg, const InitialData& f, int p, int j,
                                const MultiTime& t, const SpacePoint& x, const QuadratureSpec& q);

// Closed-form BTBS boundary values; t must lie on the orthant boundary and,
// for the p = 2 / t_j = 0 case, have all other components positive.
double btbs_boundary_values(const FieldConfig& cfg, const InitialData& f, int p, int j,
                            const MultiTime& t, const SpacePoint& x);

// KS field moments over the full line per axis:
//   p = 0: u;  p = 1 with j: U^(j) (first power);  p = 2 with j: scriptU^(j).
ComplexQuadResult quad_ks_moment(const FieldConfig& cfg, const InitialData& f, int p, int j,
                                 const MultiTime& t, const SpacePoint& x, const QuadratureSpec& q);

enum class KsField { U, U1, U2 };

// Temporal boundary values for the KS family. I is the (1-based, nonempty) set
// of axes pinned to zero; t supplies the remaining components.
std::complex<double> ks_boundary_values(const FieldConfig& cfg, const InitialData& f, KsField which,
                                        int j, const std::vector<int>& I, const MultiTime& t,
                                        const SpacePoint& x);

// Differentiation-under-the-integral check: FD bilaplacian of the quadrature
// value against quadrature of the analytically bilaplaced integrand.
ResidualReport commutation_check(const FieldConfig& cfg, const InitialData& f, int p, int j,
                                 const MultiTime& t, const SpacePoint& x, const QuadratureSpec& q,
                                 double h);

}  // namespace btbs
