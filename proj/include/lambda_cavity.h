/* lambda_cavity.h — C interface to the lambda-cavity simulation library.
 *
 * Usage pattern:
 *   lmc_run_config *cfg = lmc_config_new();
 *   lmc_config_load(cfg, file_text);              // optional
 *   lmc_config_set(cfg, "mode", "sweep");         // overrides
 *   lmc_status rc = lmc_run(cfg, "out.csv");
 *   if (rc != LMC_OK) fprintf(stderr, "%s\n", lmc_last_error());
 *   lmc_config_free(cfg);
 *
 * All functions returning lmc_status leave a message retrievable through
 * lmc_last_error() (thread-local) on failure.
 */

#ifndef LAMBDA_CAVITY_H
#define LAMBDA_CAVITY_H

#include <stddef.h>

#if defined(_WIN32)
#define LMC_API __declspec(dllexport)
#else
#define LMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque run configuration handle. */
typedef struct lmc_run_config lmc_run_config;

/* Status values double as process exit codes. */
typedef enum lmc_status {
    LMC_OK = 0,
    LMC_ERR_CONFIG = 2,     /* bad key, value, or configuration state */
    LMC_ERR_SOLVER = 3,     /* numerical failure (degenerate kernel, ...) */
    LMC_ERR_VALIDATION = 4, /* validate mode ran and some check failed */
    LMC_ERR_IO = 5          /* output file could not be written */
} lmc_status;

LMC_API const char *lmc_version(void);

/* Fresh configuration with the library defaults. Never returns NULL. */
LMC_API lmc_run_config *lmc_config_new(void);
LMC_API void lmc_config_free(lmc_run_config *config);

/* Parses key = value lines ('#' comments) into the configuration. */
LMC_API lmc_status lmc_config_load(lmc_run_config *config, const char *text);

/* Sets a single key (same keys as the file format). */
LMC_API lmc_status lmc_config_set(lmc_run_config *config, const char *key, const char *value);

/* Canonical string form of a key's current value. Returns LMC_ERR_CONFIG
 * for unknown keys; truncates silently if buffer_size is too small. */
LMC_API lmc_status lmc_config_get(const lmc_run_config *config, const char *key, char *buffer,
                                  size_t buffer_size);

/* Validates the configuration, runs the requested mode, and writes the
 * output file. output_path (may be NULL) overrides the configured path. */
LMC_API lmc_status lmc_run(const lmc_run_config *config, const char *output_path);

/* Message from the most recent failure on this thread ("" if none). */
LMC_API const char *lmc_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* LAMBDA_CAVITY_H */
