#ifndef ANISO_DBVP_H
#define ANISO_DBVP_H

#include <stddef.h>

#if defined(ADBVP_BUILDING_LIBRARY)
#define ADBVP_API __attribute__((visibility("default")))
#else
#define ADBVP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum adbvp_status {
  ADBVP_OK = 0,
  ADBVP_HYPOTHESIS_FAILED = 1,
  ADBVP_NO_CONVERGENCE = 2,
  ADBVP_CONFIG_ERROR = 3,
  ADBVP_INVALID_ARGUMENT = 4,
  ADBVP_INTERNAL_ERROR = 5
} adbvp_status;

typedef struct adbvp_config adbvp_config;
typedef struct adbvp_instance adbvp_instance;

ADBVP_API const char* adbvp_version(void);

/* Configurations. On failure *out is set to NULL and adbvp_last_error() describes why. */
ADBVP_API adbvp_status adbvp_config_from_json(const char* json_text, adbvp_config** out);
ADBVP_API adbvp_status adbvp_config_from_file(const char* path, adbvp_config** out);
ADBVP_API adbvp_status adbvp_config_from_example(const char* example_id, adbvp_config** out);
/* Merges a JSON object of run/output keys (theorem, lambda, c1, format, ...). */
ADBVP_API adbvp_status adbvp_config_apply_overrides(adbvp_config* cfg, const char* json_text);
ADBVP_API void adbvp_config_free(adbvp_config* cfg);
/* output.path of the configuration, or NULL. Valid until the config is modified or freed. */
ADBVP_API const char* adbvp_config_output_path(const adbvp_config* cfg);

/* Newline-separated list of built-in example ids; free with adbvp_string_free. */
ADBVP_API char* adbvp_example_ids(void);

ADBVP_API adbvp_status adbvp_instance_create(const adbvp_config* cfg, adbvp_instance** out);
ADBVP_API void adbvp_instance_free(adbvp_instance* inst);
ADBVP_API int adbvp_instance_T(const adbvp_instance* inst);

/* u holds T+2 values u(0..T+1) with u(0) = u(T+1) = 0. */
ADBVP_API adbvp_status adbvp_energy(const adbvp_instance* inst, const double* u, size_t n, double lambda,
                                    double* out_I);
/* out receives the T interior residual components. */
ADBVP_API adbvp_status adbvp_residual(const adbvp_instance* inst, const double* u, size_t n, double lambda,
                                      double* out, size_t out_n);

/* Runs a command (validate, constants, certify, solve, sweep, multistart, verify,
 * example, propcheck). *out receives the JSON or CSV body; the return value is
 * the command's exit status. For errors *out is an error object. */
ADBVP_API int adbvp_run(const adbvp_config* cfg, const char* command, char** out);

/* JSON error object of the last failure on the calling thread, or "" if none. */
ADBVP_API const char* adbvp_last_error(void);
ADBVP_API void adbvp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
