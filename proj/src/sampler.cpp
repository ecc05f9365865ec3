#include "btbs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace btbs {

namespace {

constexpr std::uint64_t kBlock = 4096;

// Blocked two-pass reduction: block sums are independent of the worker count
// and are combined in fixed index order, so results are bit-identical for any
// parallelism level.
template <typename SampleFn>
Estimate blocked_mean(std::uint64_t n_samples, const RngStream& rng, int workers,
                      SampleFn&& sample) {
  if (n_samples < 2) throw std::invalid_argument("estimator: need at least 2 samples");
  if (workers < 1) workers = 1;
  std::uint64_t n_blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<double> block_sum(n_blocks, 0.0), block_sumsq(n_blocks, 0.0);

  auto run_blocks = [&](std::uint64_t b0, std::uint64_t b1) {
    for (std::uint64_t b = b0; b < b1; ++b) {
      double s = 0.0, s2 = 0.0;
      std::uint64_t lo = b * kBlock, hi = std::min(n_samples, lo + kBlock);
      for (std::uint64_t i = lo; i < hi; ++i) {
        double v = sample(i);
        s += v;
        s2 += v * v;
      }
      block_sum[b] = s;
      block_sumsq[b] = s2;
    }
  };

  if (workers == 1 || n_blocks == 1) {
    run_blocks(0, n_blocks);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t w = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n_blocks);
    for (std::uint64_t k = 0; k < w; ++k) {
      std::uint64_t b0 = n_blocks * k / w, b1 = n_blocks * (k + 1) / w;
      pool.emplace_back(run_blocks, b0, b1);
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t b = 0; b < n_blocks; ++b) {
    sum += block_sum[b];
    sumsq += block_sumsq[b];
  }
  double mean = sum / static_cast<double>(n_samples);
  double var = (sumsq - static_cast<double>(n_samples) * mean * mean) /
               static_cast<double>(n_samples - 1);
  var = std::max(var, 0.0);
  Estimate e;
  e.value = mean;
  e.std_error = std::sqrt(var / static_cast<double>(n_samples));
  e.n_samples = n_samples;
  e.seed = rng.seed;
  e.stream_id = rng.stream_id;
  return e;
}

}  // namespace

std::vector<double> sample_brownian_times(const MultiTime& t, const RngStream& rng,
                                          std::uint64_t sample_index) {
  if (!t.nonnegative()) throw std::invalid_argument("sample_brownian_times: t must be >= 0");
  std::vector<double> s(static_cast<std::size_t>(t.size()));
  for (int i = 0; i < t.size(); ++i) {
    // |B(t_i)| is exactly 0 at t_i = 0.
    s[static_cast<std::size_t>(i)] =
        (t[i] == 0.0)
            ? 0.0
            : std::sqrt(t[i]) * std::abs(rng::normal(rng, sample_index, static_cast<std::uint64_t>(i)));
  }
  return s;
}

BtbsDraw sample_btbs_point(const FieldConfig& cfg, const MultiTime& t, const SpacePoint& x,
                           const RngStream& rng, std::uint64_t sample_index) {
  cfg.validate();
  if (t.size() != cfg.n) throw std::invalid_argument("sample_btbs_point: time dimension mismatch");
  if (x.dim() != cfg.d) throw std::invalid_argument("sample_btbs_point: space dimension mismatch");
  BtbsDraw draw;
  draw.times = sample_brownian_times(t, rng, sample_index);
  double variance = 1.0;
  for (double si : draw.times) variance *= si;
  double sigma = std::sqrt(variance);
  draw.w = x;
  for (int k = 0; k < cfg.d; ++k)
    draw.w[k] += sigma * rng::normal(rng, sample_index, static_cast<std::uint64_t>(cfg.n + k));
  return draw;
}

Estimate mc_btbs_moment(const FieldConfig& cfg, const InitialData& f, int p, int j,
                        const MultiTime& t, const SpacePoint& x, std::uint64_t n_samples,
                        const RngStream& rng, int workers) {
  cfg.validate();
  if (p != 0 && p != 2) throw std::invalid_argument("mc_btbs_moment: p must be 0 or 2");
  if (p == 2 && (j < 1 || j > cfg.n))
    throw std::invalid_argument("mc_btbs_moment: p = 2 requires j in 1..n");
  return blocked_mean(n_samples, rng, workers, [&](std::uint64_t i) {
    BtbsDraw d = sample_btbs_point(cfg, t, x, rng, i);
    double wt = 1.0;
    if (p == 2) {
      for (int k = 0; k < cfg.n; ++k)
        if (k != j - 1) wt *= d.times[static_cast<std::size_t>(k)] * d.times[static_cast<std::size_t>(k)];
    }
    return wt * f.value(d.w);
  });
}

Estimate mc_bs_moment(const FieldConfig& cfg, const InitialData& f, const MultiTime& t,
                      const SpacePoint& x, std::uint64_t n_samples, const RngStream& rng,
                      int workers) {
  cfg.validate();
  if (t.size() != cfg.n) throw std::invalid_argument("mc_bs_moment: time dimension mismatch");
  if (!t.nonnegative()) throw std::invalid_argument("mc_bs_moment: t must be >= 0");
  double sigma = std::sqrt(t.product());
  return blocked_mean(n_samples, rng, workers, [&](std::uint64_t i) {
    SpacePoint w = x;
    for (int k = 0; k < cfg.d; ++k)
      w[k] += sigma * rng::normal(rng, i, static_cast<std::uint64_t>(k));
    return f.value(w);
  });
}

SheetSample sample_sheet_grid(const FieldConfig& cfg, const std::vector<std::vector<double>>& knots,
                              const RngStream& rng, std::uint64_t realization) {
  cfg.validate();
  if (static_cast<int>(knots.size()) != cfg.n)
    throw std::invalid_argument("sample_sheet_grid: one knot vector per time axis required");
  for (const auto& axis : knots) {
    if (axis.empty() || axis.front() != 0.0)
      throw std::invalid_argument("sample_sheet_grid: knots must start at 0");
    for (std::size_t k = 1; k < axis.size(); ++k)
      if (!(axis[k] > axis[k - 1]))
        throw std::invalid_argument("sample_sheet_grid: knots must be strictly increasing");
  }

  SheetSample out;
  out.knots = knots;
  int n = cfg.n;
  out.shape.resize(static_cast<std::size_t>(n));
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    out.shape[static_cast<std::size_t>(i)] = static_cast<int>(knots[static_cast<std::size_t>(i)].size());
    total *= knots[static_cast<std::size_t>(i)].size();
  }
  out.values.assign(total * static_cast<std::size_t>(cfg.d), 0.0);

  // Fill with independent rectangle increments, then accumulate n-dimensional
  // prefix sums in place; boundary faces (index 0 on any axis) stay 0.
  std::vector<std::size_t> stride(static_cast<std::size_t>(n), 1);
  for (int i = 1; i < n; ++i)
    stride[static_cast<std::size_t>(i)] =
        stride[static_cast<std::size_t>(i - 1)] * static_cast<std::size_t>(out.shape[static_cast<std::size_t>(i - 1)]);

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    bool boundary = false;
    double cell = 1.0;
    std::size_t rem = flat;
    for (int i = 0; i < n; ++i) {
      int ii = static_cast<int>(rem % static_cast<std::size_t>(out.shape[static_cast<std::size_t>(i)]));
      rem /= static_cast<std::size_t>(out.shape[static_cast<std::size_t>(i)]);
      idx[static_cast<std::size_t>(i)] = ii;
      if (ii == 0) {
        boundary = true;
        break;
      }
      cell *= knots[static_cast<std::size_t>(i)][static_cast<std::size_t>(ii)] -
              knots[static_cast<std::size_t>(i)][static_cast<std::size_t>(ii - 1)];
    }
    if (boundary) continue;
    double sd = std::sqrt(cell);
    for (int c = 0; c < cfg.d; ++c) {
      std::uint64_t slot = static_cast<std::uint64_t>(c) + static_cast<std::uint64_t>(cfg.d) * realization;
      out.values[flat * static_cast<std::size_t>(cfg.d) + static_cast<std::size_t>(c)] =
          sd * rng::normal(rng, flat, slot);
    }
  }
  // Prefix-sum along each axis.
  for (int axis = 0; axis < n; ++axis) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t ii = (flat / stride[static_cast<std::size_t>(axis)]) %
                       static_cast<std::size_t>(out.shape[static_cast<std::size_t>(axis)]);
      if (ii == 0) continue;
      std::size_t prev = flat - stride[static_cast<std::size_t>(axis)];
      for (int c = 0; c < cfg.d; ++c)
        out.values[flat * static_cast<std::size_t>(cfg.d) + static_cast<std::size_t>(c)] +=
            out.values[prev * static_cast<std::size_t>(cfg.d) + static_cast<std::size_t>(c)];
    }
  }
  return out;
}

std::vector<Estimate> martingale_probe(const FieldConfig& cfg, const FieldEval& u_eval, int j,
                                       const MultiTime& t, const SpacePoint& x,
                                       const std::vector<double>& probes, std::uint64_t n_samples,
                                       const RngStream& rng, int workers) {
  cfg.validate();
  if (j < 1 || j > cfg.n) throw std::invalid_argument("martingale_probe: bad j");
  if (!t.interior()) throw std::invalid_argument("martingale_probe: t must be interior");
  std::vector<Estimate> out;
  out.reserve(probes.size());
  double cond = t.product_excluding(j);  // variance rate along axis j
  for (std::size_t pi = 0; pi < probes.size(); ++pi) {
    double sj = probes[pi];
    if (!(sj >= 0.0) || sj >= t[j - 1])
      throw std::invalid_argument("martingale_probe: probe outside [0, t_j)");
    MultiTime shifted = t;
    shifted[j - 1] = t[j - 1] - sj;
    double sigma = std::sqrt(sj * cond);
    RngStream probe_rng{rng.seed, rng.stream_id + pi};
    out.push_back(blocked_mean(n_samples, probe_rng, workers, [&](std::uint64_t i) {
      SpacePoint w = x;
      for (int k = 0; k < cfg.d; ++k)
        w[k] += sigma * rng::normal(probe_rng, i, static_cast<std::uint64_t>(k));
      return u_eval(shifted, w);
    }));
  }
  return out;
}

}  // namespace btbs
