#pragma once

#include <vector>

namespace btbs {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1]. Cached per order.
const Rule& gauss_legendre(int order);

// Gauss-Hermite for the standard normal weight: sum w_i g(z_i) approximates
// E g(Z), Z ~ N(0,1). Cached per order.
const Rule& gauss_hermite_normal(int order);

}  // namespace btbs
