#ifndef EMAI_EMAI_H
#define EMAI_EMAI_H

#include <stddef.h>

#if defined(__GNUC__)
#define EMAI_API __attribute__((visibility("default")))
#else
#define EMAI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; nonzero values double as CLI exit codes. */
typedef enum emai_status {
  EMAI_OK = 0,
  EMAI_ERR_GENERIC = 1,
  EMAI_ERR_CONFIG = 2,
  EMAI_ERR_MISSING_ARTIFACT = 3,
  EMAI_ERR_NUMERIC = 4,
  EMAI_ERR_INCOMPATIBLE = 5
} emai_status;

/* A loaded, validated run configuration. */
typedef struct emai_run emai_run;

/* config_path may be NULL or "" for the built-in defaults. Each override is
   "section.key=value"; value is read as JSON when it parses, else as a string. */
EMAI_API emai_status emai_run_create(const char* config_path, const char* const* overrides, size_t n_overrides,
                            emai_run** out);
EMAI_API void emai_run_destroy(emai_run* run);

/* Output directory of the run (owned by the handle). */
EMAI_API const char* emai_run_output_dir(const emai_run* run);

EMAI_API emai_status emai_train_target(emai_run* run);
EMAI_API emai_status emai_train_emai(emai_run* run);
EMAI_API emai_status emai_explain(emai_run* run, size_t episodes);
EMAI_API emai_status emai_eval_fidelity(emai_run* run);
EMAI_API emai_status emai_attack(emai_run* run);
EMAI_API emai_status emai_patch(emai_run* run);

/* JSON summary of the last successful command on this handle (owned by the
   handle, valid until the next command). */
EMAI_API const char* emai_run_summary(const emai_run* run);

/* Renders a replay file as "ascii" or "csv". *out is released with emai_free. */
EMAI_API emai_status emai_render(const char* replay_path, const char* mode, char** out);
EMAI_API void emai_free(void* p);

/* One-line message for the last failure on this thread. */
EMAI_API const char* emai_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
