/* C interface to the btbs numerical laboratory.
 *
 * Conventions:
 *   - All functions return a status code (BTBS_OK on success) unless noted.
 *   - On failure, btbs_last_error() returns a thread-local message describing
 *     the most recent error on the calling thread.
 *   - Time vectors have length n, space points length d; j indices are
 *     1-based (pass 0 where an axis index is not applicable).
 */
#ifndef BTBS_H
#define BTBS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define BTBS_OK 0        /* success */
#define BTBS_EINVAL 1    /* invalid argument */
#define BTBS_EACCURACY 2 /* quadrature refinement failed its accuracy check */
#define BTBS_EINTERNAL 3 /* unexpected internal failure */

/* Solution family selectors. */
#define BTBS_FAMILY_BTBS 0
#define BTBS_FAMILY_KS 1
#define BTBS_FAMILY_BS 2

const char* btbs_version(void);
const char* btbs_last_error(void);

/* Initial data f: opaque handle.
 * Spec strings: "cosine:th1,...,thd" | "gaussian:c1,...,cd,width" | "const:c".
 * dim is the spatial dimension d. Returns NULL on parse failure. */
typedef struct btbs_initial_data btbs_initial_data;
btbs_initial_data* btbs_initial_data_parse(const char* spec, int dim);
void btbs_initial_data_free(btbs_initial_data* f);

/* deriv: 0 = f(x), 1 = Laplacian, 2 = bilaplacian. */
int btbs_initial_eval(const btbs_initial_data* f, const double* x, int d, int deriv, double* out);

/* E f(x + W(t)) for the n-parameter sheet: Gaussian smoothing at variance
 * prod(t). Requires every t_i > 0. */
int btbs_heat_expectation(const btbs_initial_data* f, const double* t, int n, const double* x,
                          int d, double* out);

/* Transition kernels. */
int btbs_kernel_bm(double t, double x, double y, double* out);
int btbs_kernel_bs(int n, int d, const double* t, const double* x, const double* y, double* out);
int btbs_propagator(int n, int d, const double* s, const double* x, const double* y,
                    double* out_re, double* out_im);
/* d = 1 only; order <= 0 selects a default. */
int btbs_kernel_kss(int n, const double* t, double x, double y, int order, double* out_re,
                    double* out_im);

/* Deterministic quadrature of a field moment.
 *   family BTBS: p in {0,2}; value is real, *out_im = 0.
 *   family KS:   p in {0,1,2}; complex value.
 *   family BS:   p = 0 closed form; error 0.
 * order <= 0 selects a frequency-matched default; truncation <= 0 the default
 * half-width. Returns BTBS_EACCURACY if refinement fails. */
int btbs_quad_moment(int family, const btbs_initial_data* f, int n, int d, int p, int j,
                     const double* t, const double* x, int order, double truncation,
                     double* out_re, double* out_im, double* out_error);

/* Closed-form field value at a time point on the orthant boundary (at least
 * one t_i = 0). For the KS family the set of zeroed axes is inferred from t. */
int btbs_boundary_value(int family, const btbs_initial_data* f, int n, int d, int p, int j,
                        const double* t, const double* x, double* out_re, double* out_im);

/* Monte Carlo moment (family BTBS or BS; real-valued). Deterministic for
 * fixed (seed, stream_id, n_samples) and any worker count. */
int btbs_mc_moment(int family, const btbs_initial_data* f, int n, int d, int p, int j,
                   const double* t, const double* x, uint64_t n_samples, uint64_t seed,
                   uint64_t stream_id, int workers, double* out_value, double* out_stderr);

/* PDE residual at one probe point.
 * system: "btbs-lin" (needs j), "btbs-nonlin", "bs-lin" (needs j),
 *         "bs-nonlin", "bs-2n", "ks" (needs j).
 * route: 0 = analytic/eigenfunction spatial route, 1 = finite differences.
 * order: quadrature order for the field evaluations (<= 0 for default).
 * notes receives stencil annotations (may be NULL; truncated to notes_cap). */
int btbs_residual(const char* system, const btbs_initial_data* f, int n, int d, int j,
                  const double* t, const double* x, double h_time, double h_space, int order,
                  int route, double* out_lhs_re, double* out_lhs_im, double* out_rhs_re,
                  double* out_rhs_im, double* out_abs, double* out_rel, char* notes,
                  int notes_cap);

/* One sheet realization on a tensor grid with exact joint law.
 * shape[a] = number of knots on axis a; knots = concatenated per-axis knot
 * arrays (each starting at 0, increasing). out_values has
 * prod(shape) * d entries, axis 0 fastest, coordinate index last. */
int btbs_sheet_sample(int n, int d, const int* shape, const double* knots, uint64_t seed,
                      uint64_t stream_id, uint64_t realization, double* out_values);

/* Martingale probe profile for the sheet heat field: estimates
 * E u(t with t_j -> t_j - s, x + W_j(s)) at each probe s in [0, t_j).
 * A flat profile (equal to the value at s = 0) is the expected outcome. */
int btbs_martingale_profile(const btbs_initial_data* f, int n, int d, int j, const double* t,
                            const double* x, const double* probes, int n_probes,
                            uint64_t n_samples, uint64_t seed, uint64_t stream_id, int workers,
                            double* out_values, double* out_stderrs);

#ifdef __cplusplus
}
#endif

#endif /* BTBS_H */
