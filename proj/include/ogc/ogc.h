#ifndef OGC_OGC_H
#define OGC_OGC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OGC_API __declspec(dllexport)
#else
#define OGC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ogc_status {
  OGC_OK = 0,
  OGC_ERR_INVALID_ARGUMENT,
  OGC_ERR_DIMENSION_MISMATCH,
  OGC_ERR_EMPTY_SET,
  OGC_ERR_UNBOUNDED,
  OGC_ERR_NO_CONVERGENCE,
  OGC_ERR_GRADIENT_NOT_FINITE,
  OGC_ERR_SERIES_OUT_OF_RANGE,
  OGC_ERR_INFEASIBLE_LIMITS,
  OGC_ERR_MISSING_ADVERTISEMENT,
  OGC_ERR_INFEASIBLE_STEP,
  OGC_ERR_PARSE,
  OGC_ERR_SCHEMA,
  OGC_ERR_SERIES_LENGTH,
  OGC_ERR_IO,
  OGC_ERR_INTERNAL
} ogc_status;

typedef struct ogc_scenario ogc_scenario;
typedef struct ogc_episode ogc_episode;

typedef struct ogc_scenario_info {
  int horizon;
  double alpha;
  double epsilon;
  uint64_t seed;
  int device_count;
  int decision_dim;
  const char* output_directory;
} ogc_scenario_info;

typedef struct ogc_summary {
  int horizon;
  double alpha;
  double epsilon;
  double average_regret;
  double average_variability;
  double grad_bound;
  double lipschitz;
  double diameter;
  double norm_bound;
  double k1;
  double k2;
  double k3;
  double bound;
  double bound_finite;
  int bibs;
  int bound_holds;
} ogc_summary;

typedef struct ogc_monte_carlo_summary {
  size_t seeds;
  double mean_average_regret;
  double stderr_average_regret;
  double mean_bound_finite;
  int all_bibs;
} ogc_monte_carlo_summary;

OGC_API const char* ogc_version(void);
OGC_API const char* ogc_status_name(ogc_status status);
// Message of the last failed call on this thread; empty after a success.
OGC_API const char* ogc_last_error_message(void);

OGC_API ogc_status ogc_scenario_load(const char* path, ogc_scenario** out);
OGC_API ogc_status ogc_scenario_parse(const char* text, const char* base_dir, ogc_scenario** out);
OGC_API void ogc_scenario_free(ogc_scenario* scenario);
OGC_API ogc_status ogc_scenario_set_seed(ogc_scenario* scenario, uint64_t seed);
OGC_API ogc_status ogc_scenario_set_alpha(ogc_scenario* scenario, double alpha);
OGC_API ogc_status ogc_scenario_set_epsilon(ogc_scenario* scenario, double epsilon);
// output_directory stays valid until the scenario is modified or freed.
OGC_API ogc_status ogc_scenario_get_info(const ogc_scenario* scenario, ogc_scenario_info* info);

OGC_API ogc_status ogc_episode_run(const ogc_scenario* scenario, ogc_episode** out);
OGC_API void ogc_episode_free(ogc_episode* episode);
OGC_API ogc_status ogc_episode_get_summary(const ogc_episode* episode, ogc_summary* summary);
// Writes the enabled output tables; meta_keys/meta_values form key: value lines.
OGC_API ogc_status ogc_episode_write(const ogc_episode* episode, const char* directory,
                                     const char* const* meta_keys, const char* const* meta_values,
                                     size_t meta_count);

OGC_API ogc_status ogc_monte_carlo_run(const ogc_scenario* scenario, const uint64_t* seeds,
                                       size_t seed_count, const char* directory,
                                       ogc_monte_carlo_summary* summary);

// Recomputes summary.csv text from directory/trajectory.csv; free with ogc_string_free.
OGC_API ogc_status ogc_report(const char* directory, char** out_text);
OGC_API void ogc_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
