/*
 * Copyright 2026 The holonomy-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to holonomy-lab. All handles are opaque; every function that
 * can fail returns an hl_status and sets a thread-local message readable
 * with hl_last_error(). Strings returned through char** are owned by the
 * caller and released with hl_string_free(). */

#ifndef HOLONOMY_LAB_H
#define HOLONOMY_LAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(HLAB_BUILDING_LIBRARY)
#define HL_API __attribute__((visibility("default")))
#else
#define HL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
  HL_OK = 0,
  HL_NOT_UNIMODULAR = 1,
  HL_COMPLEX_SPECTRUM = 2,
  HL_NOT_HYPERBOLIC = 3,
  HL_REPEATED_EIGENVALUE = 4,
  HL_HORIZON_EXCEEDED = 5,
  HL_TOO_FAR_APART = 6,
  HL_NOT_SAME_LEAF = 7,
  HL_DEGENERATE_CURVE = 8,
  HL_REMAINDER_SHORT = 9,
  HL_TOO_LARGE = 10,
  HL_PSEUDO_ISOMETRY_VIOLATED = 11,
  HL_BOUNDARY_MISMATCH = 12,
  HL_BLOW_UP = 13,
  HL_UNSUPPORTED_DIMENSION = 14,
  HL_CONFIG_INVALID = 15,
  HL_IO_FAILURE = 16,
  HL_INVALID_ARGUMENT = 17,
  HL_INTERNAL = 18
} hl_status;

typedef struct hl_torus hl_torus;
typedef struct hl_shift hl_shift;

/* Toral automorphism from n*n row-major integer entries. */
HL_API hl_status hl_torus_create(const int64_t* entries, size_t n, int horizon, hl_torus** out);
/* Same from text such as "2,1;1,1". */
HL_API hl_status hl_torus_parse(const char* matrix, int horizon, hl_torus** out);
HL_API void hl_torus_destroy(hl_torus* torus);
HL_API size_t hl_torus_dimension(const hl_torus* torus);
HL_API hl_status hl_torus_lambda(const hl_torus* torus, double* out);
/* rho gauge of a Euclidean vector v[n]. */
HL_API hl_status hl_torus_rho(const hl_torus* torus, const double* v, double* out);
/* out[n] = lift of f^k(x). */
HL_API hl_status hl_torus_iterate(const hl_torus* torus, const double* x, int k, double* out);
/* out[n] = lift of [x, y]; HL_TOO_FAR_APART unless their gauge is < delta0. */
HL_API hl_status hl_torus_bracket(const hl_torus* torus, const double* x, const double* y, double delta0,
                                  double* out);

/* Subshift "full2" or adjacency "1,1;1,0"; lambda as "2", "5/2" or "2.5". */
HL_API hl_status hl_shift_create(const char* spec, const char* lambda, hl_shift** out);
HL_API void hl_shift_destroy(hl_shift* shift);
/* Points are written "left|core@offset|right". The distance is an exact
 * rational such as "1/8". */
HL_API hl_status hl_shift_base_distance(const hl_shift* shift, const char* x, const char* y, char** out);
HL_API hl_status hl_shift_bracket(const hl_shift* shift, const char* x, const char* y, char** out);

/* Runs audit, holonomy, transitivity or shift-demo on key=value config
 * text. exit_code receives 0 (pass), 1 (certification failure or engine
 * error) or 2 (invalid config); manifest_json (optional) the run manifest.
 * Returns the status of the first error, HL_OK when none. */
HL_API hl_status hl_run_experiment(const char* subcommand, const char* config_text, int* exit_code,
                                   char** manifest_json);

HL_API void hl_string_free(char* text);
HL_API const char* hl_last_error(void);
HL_API const char* hl_version(void);
HL_API const char* hl_status_name(hl_status status);

#ifdef __cplusplus
}
#endif

#endif /* HOLONOMY_LAB_H */
