#include "btbs/rng.hpp"

#include <cmath>

namespace btbs::rng {

double normal(const RngStream& s, std::uint64_t sample, std::uint64_t slot) {
  double u1 = uniform01(s, sample, 2 * slot);
  double u2 = uniform01(s, sample, 2 * slot + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace btbs::rng
