#include "btbs/initial_data.hpp"

#include <cmath>
#include <stdexcept>

namespace btbs {

InitialData InitialData::cosine_product(std::vector<double> theta) {
  if (theta.empty()) throw std::invalid_argument("cosine_product: empty theta");
  int d = static_cast<int>(theta.size());
  return InitialData(Kind::CosineProduct, d, std::move(theta), 0.0);
}

InitialData InitialData::gaussian_bump(std::vector<double> center, double width) {
  if (center.empty()) throw std::invalid_argument("gaussian_bump: empty center");
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be > 0");
  int d = static_cast<int>(center.size());
  return InitialData(Kind::GaussianBump, d, std::move(center), width);
}

InitialData InitialData::constant(double c, int dim) {
  if (dim < 1) throw std::invalid_argument("constant: dim must be >= 1");
  return InitialData(Kind::Constant, dim, {}, c);
}

void InitialData::check_dim(const SpacePoint& x) const {
  if (x.dim() != dim_) throw std::invalid_argument("InitialData: dimension mismatch");
}

double InitialData::value(const SpacePoint& x) const {
  check_dim(x);
  switch (kind_) {
    case Kind::CosineProduct: {
      double v = 1.0;
      for (int k = 0; k < dim_; ++k) v *= std::cos(params_[k] * x[k]);
      return v;
    }
    case Kind::GaussianBump: {
      double r2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double dk = x[k] - params_[k];
        r2 += dk * dk;
      }
      return std::exp(-r2 / (2.0 * scalar_ * scalar_));
    }
    case Kind::Constant:
      return scalar_;
  }
  return 0.0;
}

std::vector<double> InitialData::gradient(const SpacePoint& x) const {
  check_dim(x);
  std::vector<double> g(static_cast<std::size_t>(dim_), 0.0);
  switch (kind_) {
    case Kind::CosineProduct: {
      for (int k = 0; k < dim_; ++k) {
        double gk = 1.0;
        for (int l = 0; l < dim_; ++l) {
          gk *= (l == k) ? -params_[l] * std::sin(params_[l] * x[l])
                         : std::cos(params_[l] * x[l]);
        }
        g[k] = gk;
      }
      break;
    }
    case Kind::GaussianBump: {
      double v = value(x);
      double w2 = scalar_ * scalar_;
      for (int k = 0; k < dim_; ++k) g[k] = -(x[k] - params_[k]) / w2 * v;
      break;
    }
    case Kind::Constant:
      break;
  }
  return g;
}

double InitialData::laplacian(const SpacePoint& x) const {
  check_dim(x);
  switch (kind_) {
    case Kind::CosineProduct: {
      double t2 = 0.0;
      for (double th : params_) t2 += th * th;
      return -t2 * value(x);
    }
    case Kind::GaussianBump: {
      double w2 = scalar_ * scalar_;
      double r2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double dk = x[k] - params_[k];
        r2 += dk * dk;
      }
      return (r2 / (w2 * w2) - dim_ / w2) * value(x);
    }
    case Kind::Constant:
      return 0.0;
  }
  return 0.0;
}

double InitialData::bilaplacian(const SpacePoint& x) const {
  check_dim(x);
  switch (kind_) {
    case Kind::CosineProduct: {
      double t2 = 0.0;
      for (double th : params_) t2 += th * th;
      return t2 * t2 * value(x);
    }
    case Kind::GaussianBump: {
      // Delta^2 of exp(-r^2/2w^2): polynomial-in-r^2 prefactor.
      double w2 = scalar_ * scalar_;
      double r2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double dk = x[k] - params_[k];
        r2 += dk * dk;
      }
      double a = 1.0 / w2;
      double p = a * a * a * a * r2 * r2 - (2.0 * dim_ + 4.0) * a * a * a * r2 +
                 dim_ * (dim_ + 2.0) * a * a;
      return p * value(x);
    }
    case Kind::Constant:
      return 0.0;
  }
  return 0.0;
}

double InitialData::heat_smoothed(const SpacePoint& x, double variance) const {
  check_dim(x);
  if (!(variance >= 0.0)) throw std::invalid_argument("heat_smoothed: variance must be >= 0");
  switch (kind_) {
    case Kind::CosineProduct: {
      double t2 = 0.0;
      for (double th : params_) t2 += th * th;
      return value(x) * std::exp(-0.5 * t2 * variance);
    }
    case Kind::GaussianBump: {
      double w2 = scalar_ * scalar_;
      double s2 = w2 + variance;
      double r2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double dk = x[k] - params_[k];
        r2 += dk * dk;
      }
      return std::pow(w2 / s2, 0.5 * dim_) * std::exp(-r2 / (2.0 * s2));
    }
    case Kind::Constant:
      return scalar_;
  }
  return 0.0;
}

std::complex<double> InitialData::complex_smoothed(const SpacePoint& x,
                                                   std::complex<double> variance) const {
  check_dim(x);
  switch (kind_) {
    case Kind::CosineProduct: {
      double t2 = 0.0;
      for (double th : params_) t2 += th * th;
      return value(x) * std::exp(-0.5 * t2 * variance);
    }
    case Kind::GaussianBump: {
      double w2 = scalar_ * scalar_;
      std::complex<double> s2 = w2 + variance;
      double r2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double dk = x[k] - params_[k];
        r2 += dk * dk;
      }
      return std::pow(w2 / s2, 0.5 * dim_) * std::exp(-r2 / (2.0 * s2));
    }
    case Kind::Constant:
      return scalar_;
  }
  return {0.0, 0.0};
}

double InitialData::theta_norm2() const {
  if (kind_ == Kind::Constant) return 0.0;
  if (kind_ != Kind::CosineProduct)
    throw std::invalid_argument("theta_norm2: cosine data required");
  double t2 = 0.0;
  for (double th : params_) t2 += th * th;
  return t2;
}

}  // namespace btbs
