#ifndef SNLS_SNLS_H
#define SNLS_SNLS_H

/* C interface to the solver library. All handles are opaque and owned by
 * the caller once returned; release them with the matching _destroy call.
 * Every function returns an snls_status. On failure the calling thread's
 * last error (see snls_last_error_json) describes what went wrong. */

#include <stddef.h>

#if defined(SNLS_BUILDING_LIBRARY)
#define SNLS_API __attribute__((visibility("default")))
#else
#define SNLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes. */
typedef enum snls_status {
  SNLS_OK = 0,
  SNLS_ERR_INTERNAL = 1,
  SNLS_ERR_CONFIG = 2,
  SNLS_ERR_NUMERICAL = 3,
  SNLS_ERR_IO = 4
} snls_status;

typedef struct snls_grid snls_grid;
typedef struct snls_field snls_field;
typedef struct snls_propagator snls_propagator;

SNLS_API const char* snls_version(void);

/* One-line JSON object {"error": {"code", "exit_code", "message"}} for the
 * last failure on this thread, or "" if none. Valid until the next call
 * into the library from the same thread. */
SNLS_API const char* snls_last_error_json(void);

/* Runs an experiment from a config file. experiment and output_dir may be
 * NULL (taken from the file); threads <= 0 means 1. */
SNLS_API snls_status snls_run(const char* experiment, const char* config_path,
                              const char* output_dir, int threads);

/* Whitespace-delimited extraction of named columns from a series CSV. */
SNLS_API snls_status snls_emit_plot_data(const char* series_csv, const char* const* columns,
                                         size_t n_columns, const char* output_path);

/* Lebesgue exponents r, p, q, q' for nonlinearity power alpha. */
SNLS_API snls_status snls_exponents(double alpha, int permissive, double* r, double* p, double* q,
                                    double* q_dual);

SNLS_API snls_status snls_grid_create(size_t n_points, double length, snls_grid** out);
SNLS_API void snls_grid_destroy(snls_grid* grid);

/* values: 2 * n_points doubles, interleaved (re, im). */
SNLS_API snls_status snls_field_create(const snls_grid* grid, const double* values, snls_field** out);
SNLS_API size_t snls_field_size(const snls_field* field);
SNLS_API snls_status snls_field_values(const snls_field* field, double* values);
SNLS_API void snls_field_destroy(snls_field* field);

/* potential: n_points samples. */
SNLS_API snls_status snls_propagator_create_strang(const snls_grid* grid, const double* potential,
                                                   double dt, snls_propagator** out);
SNLS_API snls_status snls_propagator_create_eigen(const snls_grid* grid, const double* potential,
                                                  snls_propagator** out);
SNLS_API snls_status snls_propagator_evolve(const snls_propagator* prop, const snls_field* field,
                                            double t, snls_field** out);
SNLS_API void snls_propagator_destroy(snls_propagator* prop);

SNLS_API snls_status snls_checkpoint_write(const char* path, const snls_field* field, double time);
SNLS_API snls_status snls_checkpoint_read(const char* path, snls_field** out, double* time);

#ifdef __cplusplus
}
#endif

#endif
