#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "btbs/initial_data.hpp"
#include "btbs/rng.hpp"
#include "btbs/types.hpp"

namespace btbs {

// One draw of the Brownian-time vector (|B^(1)(t_1)|, ..., |B^(n)(t_n)|).
std::vector<double> sample_brownian_times(const MultiTime& t, const RngStream& rng,
                                          std::uint64_t sample_index = 0);

struct BtbsDraw {
  std::vector<double> times;  // Brownian-time vector s
  SpacePoint w;               // sheet value, Gaussian given s
};

// One BTBS draw via the conditional-Gaussian collapse: given the Brownian
// times s, the sheet value is Normal(x, prod(s) * I_d).
BtbsDraw sample_btbs_point(const FieldConfig& cfg, const MultiTime& t, const SpacePoint& x,
                           const RngStream& rng, std::uint64_t sample_index = 0);

// Monte Carlo moment of the BTBS field: p = 0 estimates u(t, x); p = 2 with j
// estimates scriptU^(j). Deterministic for fixed (seed, stream, N) and any
// worker count.
Estimate mc_btbs_moment(const FieldConfig& cfg, const InitialData& f, int p, int j,
                        const MultiTime& t, const SpacePoint& x, std::uint64_t n_samples,
                        const RngStream& rng, int workers = 1);

// Monte Carlo estimate of the plain Brownian-sheet field E f(W^x(t)).
Estimate mc_bs_moment(const FieldConfig& cfg, const InitialData& f, const MultiTime& t,
                      const SpacePoint& x, std::uint64_t n_samples, const RngStream& rng,
                      int workers = 1);

struct SheetSample {
  std::vector<std::vector<double>> knots;  // per-axis, starting at 0
  // values[flat_grid_index * d + coord]; axis 0 is the fastest index.
  std::vector<double> values;
  std::vector<int> shape;  // knots per axis
};

// Exact joint sheet law on a tensor grid via independent rectangle increments.
SheetSample sample_sheet_grid(const FieldConfig& cfg, const std::vector<std::vector<double>>& knots,
                              const RngStream& rng, std::uint64_t realization = 0);

using FieldEval = std::function<double(const MultiTime&, const SpacePoint&)>;

// E[M(s_j)] with M(s_j) = u_{t excluding j}(t_j - s_j, W(s_j)); a flat profile
// equal to u(t, x) is the testable consequence of uniqueness.
std::vector<Estimate> martingale_probe(const FieldConfig& cfg, const FieldEval& u_eval, int j,
                                       const MultiTime& t, const SpacePoint& x,
                                       const std::vector<double>& probes, std::uint64_t n_samples,
                                       const RngStream& rng, int workers = 1);

}  // namespace btbs
