#ifndef PSEUDOHOPF_H
#define PSEUDOHOPF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PhStatus {
  PH_STATUS_OK = 0,
  // A verification ran and at least one check failed.
  PH_STATUS_CHECK_FAILED = 1,
  PH_STATUS_INVALID_ARGUMENT = 2,
  PH_STATUS_UNSUPPORTED = 3,
  PH_STATUS_NUMERICAL = 4,
  PH_STATUS_PANIC = 5,
} PhStatus;

typedef enum PhModelKind {
  // Parameters `m`, `s`.
  PH_MODEL_KIND_THETA = 0,
  // Parameter `k`.
  PH_MODEL_KIND_COMPLEX_HOPF = 1,
  // Parameter `k`.
  PH_MODEL_KIND_QUATERNIONIC_HOPF = 2,
  PH_MODEL_KIND_OCTONIONIC_HOPF = 3,
  // Parameter `k`.
  PH_MODEL_KIND_COMPLEX_TO_QUATERNIONIC = 4,
} PhModelKind;

typedef enum PhField {
  PH_FIELD_REAL = 0,
  PH_FIELD_COMPLEX = 1,
  PH_FIELD_QUATERNION = 2,
} PhField;

typedef enum PhTotal {
  PH_TOTAL_REAL = 0,
  PH_TOTAL_COMPLEX = 1,
} PhTotal;

typedef enum PhBase {
  PH_BASE_COMPLEX = 0,
  PH_BASE_QUATERNIONIC = 1,
  PH_BASE_REAL_HYPERBOLIC = 2,
  PH_BASE_CAYLEY = 3,
  PH_BASE_ANY = 4,
} PhBase;

// Opaque model handle.
typedef struct PhModel PhModel;

typedef struct PhDims {
  size_t total_dim;
  size_t total_index;
  size_t fibre_dim;
  size_t base_dim;
  size_t base_index;
} PhDims;

// Outcome of one check. `max_residual` is NaN when the check errored.
typedef struct PhCheckResult {
  bool pass;
  double max_residual;
  double tol;
} PhCheckResult;

// `summands` copies of `M(size, field)`.
typedef struct PhAlgebraClass {
  enum PhField field;
  size_t size;
  size_t summands;
} PhAlgebraClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the
// library.
const char *ph_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ph_string_free(char *s);

// Creates a model. `a` and `b` are `m, s` for theta, `k` (in `a`) for the
// Hopf families; unused parameters are ignored.
//
// # Safety
// `out` must be valid for writes.
enum PhStatus ph_model_new(enum PhModelKind kind, size_t a, size_t b, struct PhModel **out);

// Frees a model. Null is ignored.
//
// # Safety
// `model` must come from [`ph_model_new`] and not have been freed.
void ph_model_free(struct PhModel *model);

// # Safety
// `model` must be a live handle, `out` valid for writes.
enum PhStatus ph_model_dims(const struct PhModel *model, struct PhDims *out);

// Runs the named check. `model` may be null for checks without a model.
// Returns `PH_STATUS_CHECK_FAILED` when the check ran and failed; `out` is
// filled in either case.
//
// # Safety
// `name` must be a nul-terminated string, `model` null or live, `out`
// valid for writes.
enum PhStatus ph_run_check(const struct PhModel *model,
                           const char *name,
                           size_t samples,
                           double tol,
                           uint64_t seed,
                           struct PhCheckResult *out);

// The real Clifford algebra with `p` positive and `q` negative generators.
//
// # Safety
// `out` must be valid for writes.
enum PhStatus ph_classify(size_t p, size_t q, struct PhAlgebraClass *out);

// Obstruction verdict. `reason` receives the reason string when the
// combination is obstructed and null otherwise; free it with
// [`ph_string_free`]. `reason` itself may be null.
//
// # Safety
// `admissible` must be valid for writes; `reason` null or valid for writes.
enum PhStatus ph_obstruction(enum PhTotal total,
                             size_t s,
                             size_t n,
                             enum PhBase base,
                             bool *admissible,
                             char **reason);

// Runs every supported check on `model`, or the full default suite when
// `model` is null, and returns the JSON report in `json`.
//
// # Safety
// `model` null or live, `json` valid for writes.
enum PhStatus ph_verify_json(const struct PhModel *model,
                             size_t samples,
                             double tol,
                             uint64_t seed,
                             char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSEUDOHOPF_H */
