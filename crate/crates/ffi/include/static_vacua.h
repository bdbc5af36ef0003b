#ifndef STATIC_VACUA_H
#define STATIC_VACUA_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SvacStatus {
  SVAC_STATUS_OK = 0,
  SVAC_STATUS_NULL_POINTER = 1,
  SVAC_STATUS_INVALID_ARGUMENT = 2,
  SVAC_STATUS_DOMAIN = 3,
  SVAC_STATUS_NO_ROOT = 4,
  SVAC_STATUS_UNSUPPORTED = 5,
  SVAC_STATUS_NUMERICAL = 6,
  SVAC_STATUS_PANIC = 7,
} SvacStatus;

typedef enum SvacHorizonType {
  SVAC_HORIZON_TYPE_COSMOLOGICAL = 0,
  SVAC_HORIZON_TYPE_CYLINDRICAL = 1,
  SVAC_HORIZON_TYPE_BLACK_HOLE = 2,
  /**
   * Not classified (`Λ ≤ 0`).
   */
  SVAC_HORIZON_TYPE_UNCLASSIFIED = 3,
} SvacHorizonType;

typedef enum SvacRegionKind {
  SVAC_REGION_KIND_OUTER = 0,
  SVAC_REGION_KIND_INNER = 1,
  SVAC_REGION_KIND_CYLINDRICAL = 2,
} SvacRegionKind;

typedef enum SvacModelKind {
  SVAC_MODEL_KIND_MINKOWSKI = 0,
  SVAC_MODEL_KIND_SCHWARZSCHILD = 1,
  SVAC_MODEL_KIND_DE_SITTER = 2,
  SVAC_MODEL_KIND_SCHWARZSCHILD_DE_SITTER = 3,
  SVAC_MODEL_KIND_NARIAI = 4,
  SVAC_MODEL_KIND_ANTI_DE_SITTER = 5,
  SVAC_MODEL_KIND_SCHWARZSCHILD_ADS = 6,
  SVAC_MODEL_KIND_KOTTLER_FLAT = 7,
  SVAC_MODEL_KIND_KOTTLER_HYPERBOLIC = 8,
  SVAC_MODEL_KIND_ANTI_NARIAI = 9,
} SvacModelKind;

/**
 * Opaque handle to a built catalog model.
 */
typedef struct SvacModel SvacModel;

/**
 * One horizon of a model.
 */
typedef struct SvacHorizon {
  double radius;
  double grad_norm;
  double kappa;
  enum SvacHorizonType horizon_type;
} SvacHorizon;

typedef struct SvacVirtualMass {
  double mass;
  double kappa_max;
  enum SvacRegionKind region_kind;
  bool extrapolated;
} SvacVirtualMass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *svac_version(void);

/**
 * Message of the last failed call on this thread. Valid until the next failing call.
 */
const char *svac_last_error_message(void);

/**
 * Builds a catalog model. `kind` is an [`SvacModelKind`] value; `mass` is read only when
 * `has_mass` is true and `genus` only when it is positive. Release the handle with
 * [`svac_model_free`].
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SvacStatus svac_model_new(uint32_t kind,
                               size_t n,
                               bool has_mass,
                               double mass,
                               uint32_t genus,
                               struct SvacModel **out);

/**
 * Releases a model; null is ignored.
 *
 * # Safety
 * `model` must come from [`svac_model_new`] and not be used afterwards.
 */
void svac_model_free(struct SvacModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SvacStatus svac_model_horizon_count(const struct SvacModel *model, size_t *out);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SvacStatus svac_model_horizon(const struct SvacModel *model,
                                   size_t index,
                                   struct SvacHorizon *out);

/**
 * Value of `max u`, `min u`, `sup u` or `inf u`, whichever the model has.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SvacStatus svac_model_u_extremum(const struct SvacModel *model, double *out);

/**
 * Potential at a point of the model coordinate.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SvacStatus svac_model_u(const struct SvacModel *model, double x, double *out);

/**
 * Largest of the static-equation residuals at `x`.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for writes.
 */
enum SvacStatus svac_model_static_residual(const struct SvacModel *model, double x, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SvacStatus svac_m_max(size_t n, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SvacStatus svac_k_plus(size_t n, double m, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SvacStatus svac_k_minus(size_t n, double m, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SvacStatus svac_invert_k_plus(size_t n, double kappa, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum SvacStatus svac_invert_k_minus(size_t n, double kappa, double *out);

/**
 * Horizon type with the default tolerance `1e-9 √n`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SvacStatus svac_classify(double kappa, size_t n, enum SvacHorizonType *out);

/**
 * # Safety
 * `kappas` must point to `len` readable doubles and `out` be valid for writes.
 */
enum SvacStatus svac_virtual_mass(const double *kappas,
                                  size_t len,
                                  size_t n,
                                  struct SvacVirtualMass *out);

/**
 * Fills `out[0..points*3]` with rows `(m, k_plus, k_minus)` over `[0, m_max]`; the `m = 0`
 * inner value is `+inf`.
 *
 * # Safety
 * `out` must be valid for `3 * points` writes.
 */
enum SvacStatus svac_surface_gravity_curve(size_t n, size_t points, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STATIC_VACUA_H */
