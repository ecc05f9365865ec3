#pragma once

#include <complex>

#include "btbs/initial_data.hpp"
#include "btbs/types.hpp"

namespace btbs {

enum class InitialDeriv { F, Laplacian, Bilaplacian };

double eval_initial(const InitialData& f, InitialDeriv which, const SpacePoint& x);

// E f(W^x(s)) for the Brownian sheet: Gaussian expectation with per-coordinate
// variance prod(s_i). Requires s interior.
double heat_expectation(const InitialData& f, const MultiTime& s, const SpacePoint& x);

// v(s, x) = exp(i sum s_i) * integral of f against the complex propagator with
// effective time i * prod(s_i). Requires prod(s_i) != 0; s may be signed.
std::complex<double> schrodinger_value(const InitialData& f, const std::vector<double>& s,
                                       const SpacePoint& x);

}  // namespace btbs
