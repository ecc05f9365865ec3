#include "btbs/model.hpp"

#include <cmath>
#include <stdexcept>

namespace btbs {

double eval_initial(const InitialData& f, InitialDeriv which, const SpacePoint& x) {
  switch (which) {
    case InitialDeriv::F:
      return f.value(x);
    case InitialDeriv::Laplacian:
      return f.laplacian(x);
    case InitialDeriv::Bilaplacian:
      return f.bilaplacian(x);
  }
  throw std::invalid_argument("eval_initial: unknown derivative kind");
}

double heat_expectation(const InitialData& f, const MultiTime& s, const SpacePoint& x) {
  if (!s.interior()) throw std::invalid_argument("heat_expectation: s must be interior");
  return f.heat_smoothed(x, s.product());
}

std::complex<double> schrodinger_value(const InitialData& f, const std::vector<double>& s,
                                       const SpacePoint& x) {
  double sum = 0.0, prod = 1.0;
  for (double si : s) {
    sum += si;
    prod *= si;
  }
  if (prod == 0.0) throw std::invalid_argument("schrodinger_value: singular propagator (prod s = 0)");
  // Effective complex variance i * prod(s); phase exp(i sum s).
  std::complex<double> phase = std::exp(std::complex<double>(0.0, sum));
  return phase * f.complex_smoothed(x, std::complex<double>(0.0, prod));
}

}  // namespace btbs
