#pragma once

#include <complex>
#include <vector>

#include "btbs/types.hpp"

namespace btbs {

// Admissible initial data family. All members are smooth with bounded second
// partials, and each supplies closed forms for its Laplacian, bilaplacian, and
// Gaussian smoothing (the heat and Schrodinger expectations).
class InitialData {
 public:
  enum class Kind { CosineProduct, GaussianBump, Constant };

  static InitialData cosine_product(std::vector<double> theta);
  static InitialData gaussian_bump(std::vector<double> center, double width);
  static InitialData constant(double c, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  double value(const SpacePoint& x) const;
  std::vector<double> gradient(const SpacePoint& x) const;
  double laplacian(const SpacePoint& x) const;
  double bilaplacian(const SpacePoint& x) const;

  // E f(x + sqrt(v) Z) for Z standard d-dimensional normal, v >= 0.
  double heat_smoothed(const SpacePoint& x, double variance) const;

  // Analytic continuation of heat_smoothed to complex variance under the
  // principal branch; the Schrodinger expectation uses variance i * prod(s).
  std::complex<double> complex_smoothed(const SpacePoint& x, std::complex<double> variance) const;

  // Cosine-only accessors (eigenfunction reduction: Delta -> -|theta|^2).
  double theta_norm2() const;
  const std::vector<double>& theta() const { return params_; }

  // Parameters for serialization: theta / center, and (width or c).
  const std::vector<double>& vector_param() const { return params_; }
  double scalar_param() const { return scalar_; }

 private:
  InitialData(Kind k, int dim, std::vector<double> params, double scalar)
      : kind_(k), dim_(dim), params_(std::move(params)), scalar_(scalar) {}
  void check_dim(const SpacePoint& x) const;

  Kind kind_;
  int dim_;
  std::vector<double> params_;  // theta (cosine) or center (gaussian)
  double scalar_ = 0.0;         // width (gaussian) or c (constant)
};

}  // namespace btbs
