#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace btbs {

// Point in the nonnegative time orthant; one component per PDE time parameter.
struct MultiTime {
  std::vector<double> t;

  MultiTime() = default;
  explicit MultiTime(std::vector<double> components) : t(std::move(components)) {}

  int size() const { return static_cast<int>(t.size()); }
  double operator[](int i) const { return t[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return t[static_cast<std::size_t>(i)]; }

  bool interior() const {
    for (double ti : t)
      if (!(ti > 0.0)) return false;
    return !t.empty();
  }
  bool on_boundary() const {
    for (double ti : t)
      if (ti == 0.0) return true;
    return false;
  }
  bool nonnegative() const {
    for (double ti : t)
      if (!(ti >= 0.0)) return false;
    return true;
  }
  double product() const {
    double p = 1.0;
    for (double ti : t) p *= ti;
    return p;
  }
  // Product over all components except the 1-based index j.
  double product_excluding(int j) const {
    double p = 1.0;
    for (int i = 0; i < size(); ++i)
      if (i != j - 1) p *= t[static_cast<std::size_t>(i)];
    return p;
  }
};

struct SpacePoint {
  std::vector<double> x;

  SpacePoint() = default;
  explicit SpacePoint(std::vector<double> coords) : x(std::move(coords)) {}

  int dim() const { return static_cast<int>(x.size()); }
  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
};

enum class Family { BTBS, KS, BS };

struct FieldConfig {
  int n = 1;
  int d = 1;
  Family family = Family::BTBS;

  void validate() const {
    if (n < 1) throw std::invalid_argument("FieldConfig: n must be >= 1");
    if (d < 1) throw std::invalid_argument("FieldConfig: d must be >= 1");
  }
};

// Monte Carlo estimate with provenance.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

struct StencilSpec {
  double h_time = 1e-3;
  double h_space = 1e-2;
  int order = 2;  // centered
};

struct ResidualReport {
  std::complex<double> lhs{0.0, 0.0};
  std::complex<double> rhs{0.0, 0.0};
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  MultiTime t;
  SpacePoint x;
  int j = 0;  // 1-based equation index, 0 when not applicable
  StencilSpec stencil;
  std::string notes;

  void finish() {
    abs_residual = std::abs(lhs - rhs);
    rel_residual = abs_residual / std::max({1.0, std::abs(lhs), std::abs(rhs)});
  }
};

// Quadrature refinement did not reach the requested tolerance; carries the
// last two refinement values.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, std::complex<double> coarse, std::complex<double> fine)
      : std::runtime_error(what), coarse_value(coarse), fine_value(fine) {}
  std::complex<double> coarse_value;
  std::complex<double> fine_value;
};

}  // namespace btbs
