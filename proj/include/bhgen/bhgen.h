#ifndef BHGEN_BHGEN_H
#define BHGEN_BHGEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BHG_API __declspec(dllexport)
#else
#define BHG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bhg_status {
  BHG_OK = 0,
  BHG_INVALID_ARGUMENT = 1,
  BHG_CONFIG = 2,
  BHG_IO = 3,
  BHG_QUADRATURE_NONCONVERGENCE = 4,
  BHG_BRACKET_FAILURE = 5,
  BHG_DEFECTIVE_DENOMINATOR = 6,
  BHG_EMPTY_POPULATION = 7,
  BHG_INSTABILITY = 8,
  BHG_MISMATCHED_SPEC = 9,
  BHG_EMPTY_INPUT = 10,
  BHG_DEGENERATE_VARIANCE = 11,
  BHG_VERIFY_FAILED = 12,
  BHG_INTERNAL = 99
} bhg_status;

typedef struct bhg_config bhg_config;
typedef struct bhg_trajectory bhg_trajectory;

/* Message of the last failure on the calling thread; never NULL. */
BHG_API const char* bhg_last_error_message(void);
BHG_API const char* bhg_status_name(bhg_status status);

BHG_API bhg_status bhg_config_load_file(const char* path, bhg_config** out);
BHG_API bhg_status bhg_config_load_string(const char* json, bhg_config** out);
BHG_API void bhg_config_destroy(bhg_config* config);
/* Output directory named in the config. Borrowed, lives as long as config. */
BHG_API const char* bhg_config_outputs(const bhg_config* config);

/* Strings returned through char** are owned by the caller. */
BHG_API void bhg_string_free(char* s);

BHG_API bhg_status bhg_malthus_report(const bhg_config* config, char** report);
BHG_API bhg_status bhg_run_ensemble(const bhg_config* config, const char* out_dir, unsigned jobs);
/* dt <= 0 selects the config value or the default step. */
BHG_API bhg_status bhg_run_oracle(const bhg_config* config, const char* out_csv, double dt);
/* BHG_VERIFY_FAILED when any non-informational criterion fails. */
BHG_API bhg_status bhg_run_verify(const char* ensemble_dir, const char* oracle_csv,
                                  const char* verdict_path, char** verdict_json);
BHG_API bhg_status bhg_run_figures(const char* out_dir, double scale, uint64_t master_seed,
                                   unsigned jobs);

/* Single trajectory of the config's process on stream `stream_index`. */
BHG_API bhg_status bhg_simulate(const bhg_config* config, uint64_t stream_index,
                                bhg_trajectory** out);
BHG_API void bhg_trajectory_destroy(bhg_trajectory* traj);
BHG_API size_t bhg_trajectory_size(const bhg_trajectory* traj);
BHG_API int bhg_trajectory_extinct(const bhg_trajectory* traj);
/* Counts of `cell_type` at snapshot `index`; any output pointer may be NULL. */
BHG_API bhg_status bhg_trajectory_counts(const bhg_trajectory* traj, size_t index, int cell_type,
                                         double* t, int64_t* z, int64_t* g, int64_t* zpos);

/* Malthusian parameter and derived constants of a single-type process as JSON. */
BHG_API bhg_status bhg_constants_json(const bhg_config* config, char** json);

BHG_API bhg_status bhg_ks_two_sample(const double* a, size_t na, const double* b, size_t nb,
                                     double* out);
BHG_API bhg_status bhg_pearson(const double* a, const double* b, size_t n, double* out);
/* Sets *defined to 0 when the estimate is undefined (Z = 0 or Zpos = 0). */
BHG_API bhg_status bhg_label_estimate(int64_t z, int64_t zpos, double p, double t, double* out,
                                      int* defined);

#ifdef __cplusplus
}
#endif

#endif
