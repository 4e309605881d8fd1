#ifndef PHIGROWTH_H
#define PHIGROWTH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PgGridKind {
  PG_GRID_KIND_LOG_UNIFORM = 0,
  PG_GRID_KIND_LOG_LOG_UNIFORM = 1,
} PgGridKind;

/**
 * Built-in growth scales φ.
 */
typedef enum PgPhiKind {
  /**
   * `log r`; the parameter is ignored.
   */
  PG_PHI_KIND_LOG = 0,
  /**
   * `r`; the parameter is ignored.
   */
  PG_PHI_KIND_IDENTITY = 1,
  /**
   * `(log r)^param`.
   */
  PG_PHI_KIND_LOG_POWER = 2,
  /**
   * `exp((log r)^param)`.
   */
  PG_PHI_KIND_EXP_LOG_POWER = 3,
  /**
   * `r^param`.
   */
  PG_PHI_KIND_POWER = 4,
} PgPhiKind;

typedef enum PgQuantity {
  /**
   * Nevanlinna characteristic `T(r)`.
   */
  PG_QUANTITY_T = 0,
  /**
   * `log⁺ M(r)`.
   */
  PG_QUANTITY_LOG_M = 1,
  /**
   * Zero count `n(r)`.
   */
  PG_QUANTITY_SMALL_N = 2,
  /**
   * Integrated zero count `N(r)`.
   */
  PG_QUANTITY_BIG_N = 3,
} PgQuantity;

/**
 * Comparison radius functions s.
 */
typedef enum PgSKind {
  /**
   * `param · r`.
   */
  PG_S_KIND_LINEAR = 0,
  /**
   * `r^param`.
   */
  PG_S_KIND_POWER = 1,
  /**
   * `r log r`; the parameter is ignored.
   */
  PG_S_KIND_R_LOG_R = 2,
  /**
   * `e^r`; the parameter is ignored.
   */
  PG_S_KIND_EXP = 3,
} PgSKind;

/**
 * Result code of every fallible call.
 */
typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_POINTER = 1,
  PG_STATUS_INVALID_ARGUMENT = 2,
  PG_STATUS_INSUFFICIENT_GRID = 3,
  PG_STATUS_UNSUPPORTED = 4,
  PG_STATUS_SINGULARITY = 5,
  PG_STATUS_OUT_OF_RANGE = 6,
  PG_STATUS_INCONSISTENT_EQUATION = 7,
  PG_STATUS_NUMERICAL = 8,
  PG_STATUS_PANIC = 99,
} PgStatus;

typedef struct PgEquation PgEquation;

typedef struct PgModel PgModel;

typedef struct PgPhi PgPhi;

typedef struct PgS PgS;

typedef struct PgSolution PgSolution;

/**
 * Radius grid, with both ends given as `log r`.
 */
typedef struct PgGrid {
  enum PgGridKind kind;
  double log_r_min;
  double log_r_max;
  size_t points;
} PgGrid;

typedef struct PgGrowthParams {
  double alpha;
  double beta;
  double gamma;
} PgGrowthParams;

typedef struct PgCharacteristic {
  /**
   * Radius actually used; circles too close to a pole are moved outward.
   */
  double log_r;
  double m;
  double big_n_poles;
  double t;
  double quadrature_error;
} PgCharacteristic;

typedef struct PgLemmaA {
  /**
   * Quadrature value of `m(r, f(qz)/f(z))`.
   */
  double lhs;
  double lhs_error;
  double bound;
  /**
   * `bound − (lhs + lhs_error)`.
   */
  double margin;
} PgLemmaA;

typedef struct PgResidual {
  /**
   * `max_θ log|Σ a_j(z) f(q^j z) − a_{n+1}(z)|`.
   */
  double max_log_residual;
  /**
   * `max_θ max_j log|a_j(z) f(q^j z)|`.
   */
  double log_scale;
} PgResidual;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Length of the current thread's last error message, excluding the terminating NUL; 0 if none.
 */
size_t pg_last_error_length(void);

/**
 * Copies the last error message into `buf` (NUL-terminated, truncated to `len − 1` bytes).
 * Returns the full message length.
 *
 * # Safety
 * `buf` must be valid for `len` bytes or null.
 */
size_t pg_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pg_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PgStatus pg_phi_new(enum PgPhiKind kind, double param, struct PgPhi **out);

/**
 * # Safety
 * `phi` must come from [`pg_phi_new`] and not be used afterwards.
 */
void pg_phi_free(struct PgPhi *phi);

/**
 * `log φ(r)` at `log r = x`.
 *
 * # Safety
 * `phi` must be a live handle and `out` valid for writes.
 */
enum PgStatus pg_phi_log_phi(const struct PgPhi *phi, double x, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PgStatus pg_s_new(enum PgSKind kind, double param, struct PgS **out);

/**
 * # Safety
 * `s` must come from [`pg_s_new`] and not be used afterwards.
 */
void pg_s_free(struct PgS *s);

/**
 * Growth parameters α, β, γ of the pair `(φ, s)` from the tail of `grid`.
 *
 * # Safety
 * Handles must be live; `grid` and `out` must be valid.
 */
enum PgStatus pg_growth_params(const struct PgPhi *phi,
                               const struct PgS *s,
                               const struct PgGrid *grid,
                               struct PgGrowthParams *out);

/**
 * Polynomial `Σ c_k z^k`. `im` may be null for real coefficients.
 *
 * # Safety
 * `re` (and `im` if non-null) must hold `len` doubles; `out` must be valid for writes.
 */
enum PgStatus pg_model_polynomial(const double *re,
                                  const double *im,
                                  size_t len,
                                  struct PgModel **out);

/**
 * Rational function with real coefficient lists, lowest degree first.
 *
 * # Safety
 * `numer` and `denom` must hold `n_numer` and `n_denom` doubles; `out` must be valid for writes.
 */
enum PgStatus pg_model_rational(const double *numer,
                                size_t n_numer,
                                const double *denom,
                                size_t n_denom,
                                struct PgModel **out);

/**
 * Canonical product with zeros `|z_n| = φ⁻¹(n^{1/κ})`.
 *
 * # Safety
 * `phi` must be a live handle and `out` valid for writes.
 */
enum PgStatus pg_model_example_f(const struct PgPhi *phi, double kappa, struct PgModel **out);

/**
 * Canonical product with zeros `|z_n| = φ⁻¹(c^n)`.
 *
 * # Safety
 * `phi` must be a live handle and `out` valid for writes.
 */
enum PgStatus pg_model_example_g(const struct PgPhi *phi, double c, struct PgModel **out);

/**
 * # Safety
 * `model` must come from a `pg_model_*` constructor and not be used afterwards.
 */
void pg_model_free(struct PgModel *model);

/**
 * `T(r, f) = m(r, f) + N(r, f)` at `log r = x`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum PgStatus pg_model_characteristic(const struct PgModel *model,
                                      double x,
                                      struct PgCharacteristic *out);

/**
 * `log M(r, f)` at `log r = x`, with the maximizing argument in `theta` (may be null).
 *
 * # Safety
 * `model` must be a live handle; `log_m` valid for writes, `theta` valid or null.
 */
enum PgStatus pg_model_max_modulus(const struct PgModel *model,
                                   double x,
                                   double *log_m,
                                   double *theta);

/**
 * φ-order of `quantity` fitted over `grid`. `infinite` (may be null) is set when the fit
 * diagnoses infinite order.
 *
 * # Safety
 * Handles must be live; `grid` and `rho` valid, `infinite` valid or null.
 */
enum PgStatus pg_model_order(const struct PgModel *model,
                             const struct PgPhi *phi,
                             enum PgQuantity quantity,
                             const struct PgGrid *grid,
                             double *rho,
                             bool *infinite);

/**
 * Logarithmic q-difference `m(r, f(qz)/f(z))` against its upper bound.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum PgStatus pg_lemma_a_check(const struct PgModel *model,
                               double r,
                               double lambda,
                               double q_re,
                               double q_im,
                               double delta,
                               struct PgLemmaA *out);

/**
 * `Σ_{j<n} a_j(z) f(q^j z) = rhs(z)` with `n = n_coeffs`. A null `rhs` means the zero function.
 * The models are copied; the caller keeps ownership of its handles.
 *
 * # Safety
 * `coeffs` must hold `n_coeffs` live model handles; `rhs` live or null; `out` valid for writes.
 */
enum PgStatus pg_equation_new(double q_re,
                              double q_im,
                              const struct PgModel *const *coeffs,
                              size_t n_coeffs,
                              const struct PgModel *rhs,
                              struct PgEquation **out);

/**
 * # Safety
 * `eq` must come from [`pg_equation_new`] and not be used afterwards.
 */
void pg_equation_free(struct PgEquation *eq);

/**
 * Power-series solution `c_0..c_K` with `K = truncation`. `precision_bits = 0` selects the
 * default precision for `K` and `|q|`.
 *
 * # Safety
 * `eq` must be a live handle and `out` valid for writes.
 */
enum PgStatus pg_solve(const struct PgEquation *eq,
                       size_t truncation,
                       uint32_t precision_bits,
                       struct PgSolution **out);

/**
 * # Safety
 * `sol` must come from [`pg_solve`] and not be used afterwards.
 */
void pg_solution_free(struct PgSolution *sol);

/**
 * Number of stored coefficients (`K + 1`, or fewer for a terminating solution); 0 for null.
 *
 * # Safety
 * `sol` must be a live handle or null.
 */
size_t pg_solution_len(const struct PgSolution *sol);

/**
 * Working precision of the solution in bits; 0 for null.
 *
 * # Safety
 * `sol` must be a live handle or null.
 */
uint32_t pg_solution_precision(const struct PgSolution *sol);

/**
 * `c_k` rounded to double precision.
 *
 * # Safety
 * `sol` must be a live handle; `re` and `im` valid for writes.
 */
enum PgStatus pg_solution_coeff(const struct PgSolution *sol, size_t k, double *re, double *im);

/**
 * `log|c_k|` at full precision, so values far below the double range stay usable.
 *
 * # Safety
 * `sol` must be a live handle and `out` valid for writes.
 */
enum PgStatus pg_solution_log_abs_coeff(const struct PgSolution *sol, size_t k, double *out);

/**
 * Residual of `eq` at the solution on the circle `log r = x`, sampled at `thetas` points.
 *
 * # Safety
 * Handles must be live and `out` valid for writes.
 */
enum PgStatus pg_solution_residual(const struct PgEquation *eq,
                                   const struct PgSolution *sol,
                                   double x,
                                   size_t thetas,
                                   struct PgResidual *out);

/**
 * The solution as a power-series model, for the model functions above.
 *
 * # Safety
 * `sol` must be a live handle and `out` valid for writes.
 */
enum PgStatus pg_solution_model(const struct PgSolution *sol, struct PgModel **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHIGROWTH_H */
