#include "btbs/rules.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace btbs {

namespace {

Rule make_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, Newton on P_n.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = -z;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return r;
}

// Physicists' Hermite roots (weight e^{-x^2}), then rescaled to the normal
// weight: z = sqrt(2) x, w -> w / sqrt(pi).
Rule make_gauss_hermite(int n) {
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * r.nodes[static_cast<std::size_t>(n - 1)];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * r.nodes[static_cast<std::size_t>(n - 2)];
    } else {
      z = 2.0 * z - r.nodes[static_cast<std::size_t>(n - i + 1)];
    }
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (k + 1.0)) * p2 - std::sqrt(static_cast<double>(k) / (k + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-14) break;
    }
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    r.nodes[static_cast<std::size_t>(i)] = -z;
    double w = 2.0 / (pp * pp);
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    r.weights[static_cast<std::size_t>(i)] = w;
  }
  const double sqrt2 = std::sqrt(2.0);
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] *= sqrt2;
    r.weights[i] *= inv_sqrt_pi;
  }
  return r;
}

std::mutex cache_mutex;
std::map<int, Rule> legendre_cache;
std::map<int, Rule> hermite_cache;

}  // namespace

const Rule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = legendre_cache.find(order);
  if (it == legendre_cache.end())
    it = legendre_cache.emplace(order, make_gauss_legendre(order)).first;
  return it->second;
}

const Rule& gauss_hermite_normal(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_normal: order must be >= 1");
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = hermite_cache.find(order);
  if (it == hermite_cache.end())
    it = hermite_cache.emplace(order, make_gauss_hermite(order)).first;
  return it->second;
}

}  // namespace btbs
