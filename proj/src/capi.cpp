#include "btbs/btbs.h"

#include <cstring>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "btbs/initial_data.hpp"
#include "btbs/kernels.hpp"
#include "btbs/model.hpp"
#include "btbs/pde_verify.hpp"
#include "btbs/quadrature.hpp"
#include "btbs/sampler.hpp"
#include "btbs/types.hpp"

struct btbs_initial_data {
  btbs::InitialData f;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return BTBS_OK;
  } catch (const btbs::AccuracyError& e) {
    set_error(e.what());
    return BTBS_EACCURACY;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return BTBS_EINVAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return BTBS_EINTERNAL;
  }
}

btbs::MultiTime make_time(const double* t, int n) {
  return btbs::MultiTime(std::vector<double>(t, t + n));
}

btbs::SpacePoint make_point(const double* x, int d) {
  return btbs::SpacePoint(std::vector<double>(x, x + d));
}

btbs::FieldConfig make_config(int family, int n, int d) {
  btbs::FieldConfig cfg;
  cfg.n = n;
  cfg.d = d;
  switch (family) {
    case BTBS_FAMILY_BTBS:
      cfg.family = btbs::Family::BTBS;
      break;
    case BTBS_FAMILY_KS:
      cfg.family = btbs::Family::KS;
      break;
    case BTBS_FAMILY_BS:
      cfg.family = btbs::Family::BS;
      break;
    default:
      throw std::invalid_argument("unknown family selector");
  }
  cfg.validate();
  return cfg;
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty numeric field");
    std::size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad number: " + item);
    out.push_back(v);
  }
  return out;
}

btbs::QuadratureSpec make_quad_spec(const btbs::FieldConfig& cfg, const btbs::InitialData& f,
                                    const btbs::MultiTime& t, int order, double truncation) {
  btbs::QuadratureSpec q;
  q.order = (order > 0) ? order : btbs::default_order(cfg, f, t);
  if (truncation > 0.0) q.truncation = truncation;
  return q;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

extern "C" {

const char* btbs_version(void) { return "1.0.0"; }

const char* btbs_last_error(void) { return g_last_error.c_str(); }

btbs_initial_data* btbs_initial_data_parse(const char* spec, int dim) {
  btbs_initial_data* out = nullptr;
  int st = guarded([&] {
    require(spec != nullptr, "initial data spec is null");
    require(dim >= 1, "dim must be >= 1");
    std::string s(spec);
    auto colon = s.find(':');
    require(colon != std::string::npos, "expected kind:params");
    std::string kind = s.substr(0, colon);
    std::vector<double> params = parse_csv_doubles(s.substr(colon + 1));
    if (kind == "cosine") {
      require(static_cast<int>(params.size()) == dim, "cosine: need d frequencies");
      out = new btbs_initial_data{btbs::InitialData::cosine_product(params)};
    } else if (kind == "gaussian") {
      require(static_cast<int>(params.size()) == dim + 1, "gaussian: need d center coords + width");
      double width = params.back();
      params.pop_back();
      out = new btbs_initial_data{btbs::InitialData::gaussian_bump(params, width)};
    } else if (kind == "const") {
      require(params.size() == 1, "const: need a single value");
      out = new btbs_initial_data{btbs::InitialData::constant(params[0], dim)};
    } else {
      throw std::invalid_argument("unknown initial data kind: " + kind);
    }
  });
  if (st != BTBS_OK) return nullptr;
  return out;
}

void btbs_initial_data_free(btbs_initial_data* f) { delete f; }

int btbs_initial_eval(const btbs_initial_data* f, const double* x, int d, int deriv,
                      double* out) {
  return guarded([&] {
    require(f && x && out, "null argument");
    auto which = btbs::InitialDeriv::F;
    if (deriv == 1) which = btbs::InitialDeriv::Laplacian;
    else if (deriv == 2) which = btbs::InitialDeriv::Bilaplacian;
    else require(deriv == 0, "deriv must be 0, 1, or 2");
    *out = btbs::eval_initial(f->f, which, make_point(x, d));
  });
}

int btbs_heat_expectation(const btbs_initial_data* f, const double* t, int n, const double* x,
                          int d, double* out) {
  return guarded([&] {
    require(f && t && x && out, "null argument");
    *out = btbs::heat_expectation(f->f, make_time(t, n), make_point(x, d));
  });
}

int btbs_kernel_bm(double t, double x, double y, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = btbs::bm_kernel(t, x, y);
  });
}

int btbs_kernel_bs(int n, int d, const double* t, const double* x, const double* y, double* out) {
  return guarded([&] {
    require(t && x && y && out, "null argument");
    auto cfg = make_config(BTBS_FAMILY_BS, n, d);
    *out = btbs::bs_kernel(cfg, make_time(t, n), make_point(x, d), make_point(y, d));
  });
}

int btbs_propagator(int n, int d, const double* s, const double* x, const double* y,
                    double* out_re, double* out_im) {
  return guarded([&] {
    require(s && x && y && out_re && out_im, "null argument");
    auto cfg = make_config(BTBS_FAMILY_KS, n, d);
    auto v = btbs::propagator(cfg, std::vector<double>(s, s + n), make_point(x, d),
                              make_point(y, d));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

int btbs_kernel_kss(int n, const double* t, double x, double y, int order, double* out_re,
                    double* out_im) {
  return guarded([&] {
    require(t && out_re && out_im, "null argument");
    auto cfg = make_config(BTBS_FAMILY_KS, n, 1);
    btbs::QuadratureSpec q;
    if (order > 0) q.order = order;
    auto r = btbs::kss_kernel(cfg, make_time(t, n), x, y, q);
    *out_re = r.value.real();
    *out_im = r.value.imag();
  });
}

int btbs_quad_moment(int family, const btbs_initial_data* f, int n, int d, int p, int j,
                     const double* t, const double* x, int order, double truncation,
                     double* out_re, double* out_im, double* out_error) {
  return guarded([&] {
    require(f && t && x && out_re && out_im && out_error, "null argument");
    auto cfg = make_config(family, n, d);
    auto tt = make_time(t, n);
    auto xx = make_point(x, d);
    if (family == BTBS_FAMILY_BS) {
      require(p == 0, "bs family: only p = 0 is defined");
      *out_re = btbs::heat_expectation(f->f, tt, xx);
      *out_im = 0.0;
      *out_error = 0.0;
      return;
    }
    auto q = make_quad_spec(cfg, f->f, tt, order, truncation);
    if (family == BTBS_FAMILY_BTBS) {
      auto r = btbs::quad_btbs_moment(cfg, f->f, p, j, tt, xx, q);
      *out_re = r.value;
      *out_im = 0.0;
      *out_error = r.error_estimate;
    } else {
      auto r = btbs::quad_ks_moment(cfg, f->f, p, j, tt, xx, q);
      *out_re = r.value.real();
      *out_im = r.value.imag();
      *out_error = r.error_estimate;
    }
  });
}

int btbs_boundary_value(int family, const btbs_initial_data* f, int n, int d, int p, int j,
                        const double* t, const double* x, double* out_re, double* out_im) {
  return guarded([&] {
    require(f && t && x && out_re && out_im, "null argument");
    auto cfg = make_config(family, n, d);
    auto tt = make_time(t, n);
    auto xx = make_point(x, d);
    require(tt.on_boundary(), "t must lie on the orthant boundary");
    if (family == BTBS_FAMILY_BTBS) {
      *out_re = btbs::btbs_boundary_values(cfg, f->f, p, j, tt, xx);
      *out_im = 0.0;
    } else if (family == BTBS_FAMILY_KS) {
      std::vector<int> I;
      for (int i = 0; i < n; ++i)
        if (tt[i] == 0.0) I.push_back(i + 1);
      btbs::KsField which = btbs::KsField::U;
      if (p == 1) which = btbs::KsField::U1;
      else if (p == 2) which = btbs::KsField::U2;
      else require(p == 0, "p must be 0, 1, or 2");
      auto v = btbs::ks_boundary_values(cfg, f->f, which, j, I, tt, xx);
      *out_re = v.real();
      *out_im = v.imag();
    } else {
      require(p == 0, "bs family: only p = 0 is defined");
      *out_re = btbs::eval_initial(f->f, btbs::InitialDeriv::F, xx);
      *out_im = 0.0;
    }
  });
}

int btbs_mc_moment(int family, const btbs_initial_data* f, int n, int d, int p, int j,
                   const double* t, const double* x, uint64_t n_samples, uint64_t seed,
                   uint64_t stream_id, int workers, double* out_value, double* out_stderr) {
  return guarded([&] {
    require(f && t && x && out_value && out_stderr, "null argument");
    auto cfg = make_config(family, n, d);
    auto tt = make_time(t, n);
    auto xx = make_point(x, d);
    btbs::RngStream rng{seed, stream_id};
    btbs::Estimate e;
    if (family == BTBS_FAMILY_BTBS) {
      e = btbs::mc_btbs_moment(cfg, f->f, p, j, tt, xx, n_samples, rng, workers);
    } else if (family == BTBS_FAMILY_BS) {
      require(p == 0, "bs family: only p = 0 is defined");
      e = btbs::mc_bs_moment(cfg, f->f, tt, xx, n_samples, rng, workers);
    } else {
      throw std::invalid_argument("mc estimation covers the btbs and bs families");
    }
    *out_value = e.value;
    *out_stderr = e.std_error;
  });
}

int btbs_residual(const char* system, const btbs_initial_data* f, int n, int d, int j,
                  const double* t, const double* x, double h_time, double h_space, int order,
                  int route, double* out_lhs_re, double* out_lhs_im, double* out_rhs_re,
                  double* out_rhs_im, double* out_abs, double* out_rel, char* notes,
                  int notes_cap) {
  return guarded([&] {
    require(system && f && t && x, "null argument");
    require(out_lhs_re && out_lhs_im && out_rhs_re && out_rhs_im && out_abs && out_rel,
            "null output");
    std::string sys(system);
    auto tt = make_time(t, n);
    auto xx = make_point(x, d);
    btbs::StencilSpec st;
    if (h_time > 0.0) st.h_time = h_time;
    if (h_space > 0.0) st.h_space = h_space;
    auto spatial = (route == 0) ? btbs::SpatialRoute::AnalyticEigen
                                : btbs::SpatialRoute::FiniteDifference;
    auto timing = (route == 0) ? btbs::TimeRoute::Analytic : btbs::TimeRoute::FiniteDifference;

    btbs::ResidualReport rep;
    if (sys == "btbs-lin" || sys == "btbs-nonlin") {
      auto cfg = make_config(BTBS_FAMILY_BTBS, n, d);
      auto q = make_quad_spec(cfg, f->f, tt, order, 0.0);
      const btbs::InitialData& data = f->f;
      auto u_field = [cfg, &data, q](const btbs::MultiTime& tm, const btbs::SpacePoint& xp) {
        return std::complex<double>(btbs::quad_btbs_moment(cfg, data, 0, 0, tm, xp, q).value, 0.0);
      };
      if (sys == "btbs-lin") {
        require(j >= 1 && j <= n, "btbs-lin: need equation index j");
        auto sU = [cfg, &data, q, j](const btbs::MultiTime& tm, const btbs::SpacePoint& xp) {
          return std::complex<double>(btbs::quad_btbs_moment(cfg, data, 2, j, tm, xp, q).value,
                                      0.0);
        };
        rep = btbs::residual_btbs_system(cfg, data, j, tt, xx, u_field, sU, st, spatial);
      } else {
        std::vector<btbs::ComplexFieldEval> sUs;
        for (int jj = 1; jj <= n; ++jj)
          sUs.push_back([cfg, &data, q, jj](const btbs::MultiTime& tm, const btbs::SpacePoint& xp) {
            return std::complex<double>(btbs::quad_btbs_moment(cfg, data, 2, jj, tm, xp, q).value,
                                        0.0);
          });
        rep = btbs::residual_btbs_nonlinear(cfg, data, tt, xx, u_field, sUs, st, spatial);
      }
    } else if (sys == "bs-lin") {
      auto cfg = make_config(BTBS_FAMILY_BS, n, d);
      require(j >= 1 && j <= n, "bs-lin: need equation index j");
      rep = btbs::residual_bs_system(cfg, f->f, j, tt, xx, st, timing);
    } else if (sys == "bs-nonlin") {
      auto cfg = make_config(BTBS_FAMILY_BS, n, d);
      rep = btbs::residual_bs_nonlinear(cfg, f->f, tt, xx, st, timing);
    } else if (sys == "bs-2n") {
      auto cfg = make_config(BTBS_FAMILY_BS, n, d);
      rep = btbs::residual_bs_2n(cfg, f->f, tt, xx, st);
    } else if (sys == "ks") {
      auto cfg = make_config(BTBS_FAMILY_KS, n, d);
      require(j >= 1 && j <= n, "ks: need equation index j");
      auto q = make_quad_spec(cfg, f->f, tt, order, 0.0);
      const btbs::InitialData& data = f->f;
      auto field = [cfg, &data, q](int p, int jj) {
        return [cfg, &data, q, p, jj](const btbs::MultiTime& tm, const btbs::SpacePoint& xp) {
          return btbs::quad_ks_moment(cfg, data, p, jj, tm, xp, q).value;
        };
      };
      rep = btbs::residual_ks_system(cfg, f->f, j, tt, xx, field(0, 0), field(1, j), field(2, j),
                                     st);
    } else {
      throw std::invalid_argument("unknown system: " + sys);
    }

    *out_lhs_re = rep.lhs.real();
    *out_lhs_im = rep.lhs.imag();
    *out_rhs_re = rep.rhs.real();
    *out_rhs_im = rep.rhs.imag();
    *out_abs = rep.abs_residual;
    *out_rel = rep.rel_residual;
    if (notes && notes_cap > 0) {
      std::strncpy(notes, rep.notes.c_str(), static_cast<std::size_t>(notes_cap - 1));
      notes[notes_cap - 1] = '\0';
    }
  });
}

int btbs_sheet_sample(int n, int d, const int* shape, const double* knots, uint64_t seed,
                      uint64_t stream_id, uint64_t realization, double* out_values) {
  return guarded([&] {
    require(shape && knots && out_values, "null argument");
    auto cfg = make_config(BTBS_FAMILY_BS, n, d);
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
    const double* cur = knots;
    for (int a = 0; a < n; ++a) {
      require(shape[a] >= 1, "each axis needs at least one knot");
      axes[static_cast<std::size_t>(a)].assign(cur, cur + shape[a]);
      cur += shape[a];
    }
    auto sample = btbs::sample_sheet_grid(cfg, axes, btbs::RngStream{seed, stream_id},
                                          realization);
    std::memcpy(out_values, sample.values.data(), sample.values.size() * sizeof(double));
  });
}

int btbs_martingale_profile(const btbs_initial_data* f, int n, int d, int j, const double* t,
                            const double* x, const double* probes, int n_probes,
                            uint64_t n_samples, uint64_t seed, uint64_t stream_id, int workers,
                            double* out_values, double* out_stderrs) {
  return guarded([&] {
    require(f && t && x && probes && out_values && out_stderrs, "null argument");
    auto cfg = make_config(BTBS_FAMILY_BS, n, d);
    const btbs::InitialData& data = f->f;
    btbs::FieldEval u_eval = [&data](const btbs::MultiTime& tm, const btbs::SpacePoint& xp) {
      return btbs::heat_expectation(data, tm, xp);
    };
    auto est = btbs::martingale_probe(cfg, u_eval, j, make_time(t, n), make_point(x, d),
                                      std::vector<double>(probes, probes + n_probes), n_samples,
                                      btbs::RngStream{seed, stream_id}, workers);
    for (int i = 0; i < n_probes; ++i) {
      out_values[i] = est[static_cast<std::size_t>(i)].value;
      out_stderrs[i] = est[static_cast<std::size_t>(i)].std_error;
    }
  });
}

}  // extern "C"
