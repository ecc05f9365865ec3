#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "btbs/initial_data.hpp"
#include "btbs/types.hpp"

namespace btbs {

using ComplexFieldEval = std::function<std::complex<double>(const MultiTime&, const SpacePoint&)>;

enum class FdKind { DtJ, Laplacian, Bilaplacian, MixedDtAll };

// Centered second-order differences; forward differences are substituted (and
// flagged via the note) only within h of the temporal boundary.
std::complex<double> fd_apply(const ComplexFieldEval& field, FdKind kind, int j,
                              const MultiTime& t, const SpacePoint& x, const StencilSpec& s,
                              std::string* note = nullptr);

// Index tuples (k_1..k_n) over {1,2} with n+1 <= sum <= 2n-1; n >= 2.
std::vector<std::vector<int>> enumerate_Sn(int n);

// sqrt(prod_{i != j} t_i / (2^{4-n} pi^n t_j))
double cross_term_coefficient(int n, int j, const MultiTime& t);

// T_{1,j} (analytic Laplacian of f) or T_{2,j} (bilaplacian of the supplied
// scriptU field, finite differences unless the eigen route applies).
enum class SpatialRoute { AnalyticEigen, FiniteDifference };
double cross_term_T(const FieldConfig& cfg, const InitialData& f, int k, int j,
                    const MultiTime& t, const SpacePoint& x, const ComplexFieldEval* scriptU,
                    const StencilSpec& s, SpatialRoute route = SpatialRoute::FiniteDifference);

ResidualReport residual_btbs_system(const FieldConfig& cfg, const InitialData& f, int j,
                                    const MultiTime& t, const SpacePoint& x,
                                    const ComplexFieldEval& u_field,
                                    const ComplexFieldEval& scriptU_field, const StencilSpec& s,
                                    SpatialRoute route = SpatialRoute::FiniteDifference);

ResidualReport residual_btbs_nonlinear(const FieldConfig& cfg, const InitialData& f,
                                       const MultiTime& t, const SpacePoint& x,
                                       const ComplexFieldEval& u_field,
                                       const std::vector<ComplexFieldEval>& scriptU_fields,
                                       const StencilSpec& s,
                                       SpatialRoute route = SpatialRoute::FiniteDifference);

enum class TimeRoute { Analytic, FiniteDifference };

// Brownian-sheet heat-type system; the analytic route uses the closed-form
// field and is exact up to roundoff for the built-in data.
ResidualReport residual_bs_system(const FieldConfig& cfg, const InitialData& f, int j,
                                  const MultiTime& t, const SpacePoint& x, const StencilSpec& s,
                                  TimeRoute route = TimeRoute::Analytic);

ResidualReport residual_bs_nonlinear(const FieldConfig& cfg, const InitialData& f,
                                     const MultiTime& t, const SpacePoint& x, const StencilSpec& s,
                                     TimeRoute route = TimeRoute::Analytic);

// Exact rational arithmetic for the 2n-th order operator tables.
struct Rational {
  long long num = 0;
  long long den = 1;
  Rational() = default;
  Rational(long long n, long long d = 1);
  Rational operator+(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Polynomial in (t_1..t_n): exponent tuple -> coefficient.
using TimePoly = std::map<std::vector<int>, Rational>;

// Coefficients {c_k(t)} with d^n u / dt_1..dt_n = sum_k c_k(t) Delta^k u,
// obtained by iterating the heat-type system; index k-1 holds c_k.
std::vector<TimePoly> ln_operator(int n);

// The printed table rows, n <= 4, for side-by-side comparison.
std::vector<TimePoly> ln_operator_table(int n);

double eval_time_poly(const TimePoly& p, const MultiTime& t);
std::string time_poly_to_string(const TimePoly& p);

enum class LnSource { Recursion, PublishedTable };

ResidualReport residual_bs_2n(const FieldConfig& cfg, const InitialData& f, const MultiTime& t,
                              const SpacePoint& x, const StencilSpec& s,
                              LnSource source = LnSource::Recursion);

// Kuramoto-Sivashinsky-variant system; spatial derivatives use the cosine
// eigenfunction reduction, the time derivative is finite-difference.
ResidualReport residual_ks_system(const FieldConfig& cfg, const InitialData& f, int j,
                                  const MultiTime& t, const SpacePoint& x,
                                  const ComplexFieldEval& u_field, const ComplexFieldEval& U1_field,
                                  const ComplexFieldEval& U2_field, const StencilSpec& s);

}  // namespace btbs
