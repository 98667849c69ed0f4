#ifndef ORTHO3_H
#define ORTHO3_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Ortho3Kind {
  ORTHO3_KIND_IDENTITY = 0,
  ORTHO3_KIND_ROTATION = 1,
  ORTHO3_KIND_REFLECTION = 2,
  ORTHO3_KIND_ROTOREFLECTION = 3,
  ORTHO3_KIND_POINT_INVERSION = 4,
} Ortho3Kind;

/*
 Result codes. Values 2 to 5 match the command-line exit codes.
 */
typedef enum Ortho3Status {
  ORTHO3_STATUS_OK = 0,
  ORTHO3_STATUS_NULL_POINTER = 1,
  ORTHO3_STATUS_PARSE = 2,
  ORTHO3_STATUS_INVALID_ANGLE = 3,
  ORTHO3_STATUS_NOT_ORTHOGONAL = 4,
  ORTHO3_STATUS_INCONCLUSIVE = 5,
  ORTHO3_STATUS_ZERO_AXIS = 6,
  /*
   The decomposition has no axis or angle to report.
   */
  ORTHO3_STATUS_ABSENT = 7,
  ORTHO3_STATUS_INTERNAL = 8,
} Ortho3Status;

/*
 Opaque result of [`ortho3_classify`]; release with [`ortho3_decomposition_free`].
 */
typedef struct Ortho3Decomposition Ortho3Decomposition;

/*
 Rotation by the angle with the given cosine and sine about `axis`
 (normalized here; it need not be unit length).

 # Safety
 `axis` must point to 3 doubles and `out` to 9 writable doubles.
 */
enum Ortho3Status ortho3_rotation_matrix(const double *axis,
                                         double cos_alpha,
                                         double sin_alpha,
                                         double tol,
                                         double *out);

/*
 Reflection in the plane orthogonal to `normal`.

 # Safety
 `normal` must point to 3 doubles and `out` to 9 writable doubles.
 */
enum Ortho3Status ortho3_reflection_matrix(const double *normal, double tol, double *out);

/*
 Rotation about `axis` followed by reflection in its orthogonal plane.

 # Safety
 `axis` must point to 3 doubles and `out` to 9 writable doubles.
 */
enum Ortho3Status ortho3_rotoreflection_matrix(const double *axis,
                                               double cos_alpha,
                                               double sin_alpha,
                                               double tol,
                                               double *out);

/*
 Decomposes a row-major orthogonal matrix. On success `*out` owns a new
 handle.

 # Safety
 `matrix` must point to 9 doubles and `out` must be writable.
 */
enum Ortho3Status ortho3_classify(const double *matrix,
                                  double tol,
                                  struct Ortho3Decomposition **out);

/*
 # Safety
 `d` must be null or a handle from [`ortho3_classify`] not yet freed.
 */
void ortho3_decomposition_free(struct Ortho3Decomposition *d);

/*
 # Safety
 `d` must be a live handle.
 */
enum Ortho3Kind ortho3_decomposition_kind(const struct Ortho3Decomposition *d);

/*
 Canonical unit axis (first nonzero component positive).

 # Safety
 `d` must be a live handle and `out` must point to 3 writable doubles.
 */
enum Ortho3Status ortho3_decomposition_axis(const struct Ortho3Decomposition *d, double *out);

/*
 Cosine, sine and angle in degrees within `[0, 360)`. Any output pointer
 may be null.

 # Safety
 `d` must be a live handle; non-null outputs must be writable.
 */
enum Ortho3Status ortho3_decomposition_angle(const struct Ortho3Decomposition *d,
                                             double *cos_alpha,
                                             double *sin_alpha,
                                             double *degrees);

/*
 `+1` or `-1`.

 # Safety
 `d` must be a live handle.
 */
int ortho3_decomposition_determinant(const struct Ortho3Decomposition *d);

/*
 Frobenius norm of `MᵗM − I` for the classified matrix.

 # Safety
 `d` must be a live handle.
 */
double ortho3_decomposition_residual(const struct Ortho3Decomposition *d);

/*
 Matrix rebuilt from the decomposition.

 # Safety
 `d` must be a live handle and `out` must point to 9 writable doubles.
 */
enum Ortho3Status ortho3_decomposition_rebuild(const struct Ortho3Decomposition *d, double *out);

/*
 Classifies a JSON matrix document and writes the JSON report to `*out`
 (release with [`ortho3_string_free`]). Documents without a `mode` are
 read in float mode.

 # Safety
 `document` must be a NUL-terminated string and `out` must be writable.
 */
enum Ortho3Status ortho3_classify_json(const char *document, double tol, int digits, char **out);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void ortho3_string_free(char *s);

/*
 Message for the last failed call on this thread; empty after success.
 Valid until the next call on the same thread.
 */
const char *ortho3_last_error(void);

/*
 Library version, a static string.
 */
const char *ortho3_version(void);

#endif  /* ORTHO3_H */
