#ifndef HEAVYLIN_H
#define HEAVYLIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(HL_BUILDING_LIBRARY)
#define HL_API __attribute__((visibility("default")))
#else
#define HL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
  HL_OK = 0,
  HL_ERR_INVALID_ARGUMENT = 1,
  HL_ERR_RANGE = 2,
  HL_ERR_CONFIG = 3,
  HL_ERR_NUMERICAL = 4,
  HL_ERR_IO = 5,
  HL_ERR_INTERNAL = 6
} hl_status;

typedef struct hl_config hl_config;
typedef struct hl_result hl_result;

HL_API const char* hl_version(void);
/* Message of the last failed call on this thread, "" if none. */
HL_API const char* hl_last_error(void);

HL_API hl_status hl_config_load_file(const char* path, hl_config** out);
HL_API hl_status hl_config_load_text(const char* text, hl_config** out);
HL_API hl_status hl_config_from_preset(const char* name, hl_config** out);
HL_API hl_status hl_config_set(hl_config* cfg, const char* section, const char* key, const char* value);
/* Owned by the handle; valid until the next call that modifies it. */
HL_API const char* hl_config_text(hl_config* cfg);
HL_API void hl_config_free(hl_config* cfg);

HL_API size_t hl_preset_count(void);
HL_API const char* hl_preset_name(size_t index);

HL_API hl_status hl_run_check(const hl_config* cfg, hl_result** out);
HL_API hl_status hl_run_simulate(const hl_config* cfg, hl_result** out);
/* kind: fdd, frechet, m1, stat51 or tightness. threads = 0 uses all cores. */
HL_API hl_status hl_run_experiment(const hl_config* cfg, const char* kind, int threads, hl_result** out);

HL_API const char* hl_result_json(const hl_result* res);
HL_API const char* hl_result_table(const hl_result* res);
HL_API int hl_result_passed(const hl_result* res);
HL_API size_t hl_result_artifact_count(const hl_result* res);
HL_API const char* hl_result_artifact_name(const hl_result* res, size_t index);
HL_API const char* hl_result_artifact_data(const hl_result* res, size_t index);
HL_API void hl_result_free(hl_result* res);

HL_API double hl_h_distance(double a, double b, double c);
HL_API hl_status hl_w_m1(const double* values, size_t count, double delta, double* out);
HL_API hl_status hl_count_eta_oscillations(const double* values, size_t count, double eta, double s, double t,
                                           int64_t* out);
HL_API hl_status hl_norming_constant(const hl_config* cfg, uint64_t n, double* out);
HL_API hl_status hl_sample_innovations(const hl_config* cfg, uint64_t seed, double* out, size_t count);
HL_API hl_status hl_stable_chf(double alpha, double p, double q, double theta, double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif
