/*
 * Copyright 2026 The MIRisk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libmirisk: membership disclosure risk of synthetic tabular
 * data from nearest-neighbour distance distributions.
 *
 * Every function that can fail returns a mirisk_status. On failure a
 * description is available from mirisk_last_error() until the next failing
 * call on the same thread. Objects are opaque and owned by the caller, who
 * releases them with the matching *_free function. Strings returned by
 * accessors stay valid for the lifetime of the owning object.
 */

#ifndef MIRISK_MIRISK_H_
#define MIRISK_MIRISK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MIRISK_BUILDING_LIBRARY)
#    define MIRISK_API __declspec(dllexport)
#  else
#    define MIRISK_API __declspec(dllimport)
#  endif
#else
#  define MIRISK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mirisk_status {
  MIRISK_OK = 0,
  MIRISK_INVALID_ARGUMENT = 1,
  MIRISK_NOT_FOUND = 2,
  MIRISK_FAILED_PRECONDITION = 3,
  MIRISK_IO_ERROR = 4,
  MIRISK_INTERNAL = 5
} mirisk_status;

typedef struct mirisk_config mirisk_config;
typedef struct mirisk_report mirisk_report;
typedef struct mirisk_kde mirisk_kde;

MIRISK_API const char* mirisk_version(void);

/* Message of the most recent failure on this thread, "" if none. */
MIRISK_API const char* mirisk_last_error(void);

/* ---- Run configuration ------------------------------------------------ */

MIRISK_API mirisk_config* mirisk_config_new(void);
MIRISK_API void mirisk_config_free(mirisk_config* config);

/*
 * Sets one option. Keys match the command-line flags without the leading
 * dashes:
 *   train, unseen, synthetic, schema, distances-in, distances-out, out,
 *   attack (true-dist|realistic|method1|all), percentiles (comma list),
 *   train-fraction, bandwidth (scott|fixed:<h>), decision-threshold, prior,
 *   fpr-targets (comma list), risk-multiplier, seed, threads,
 *   density-grid, range-normalize, balance-attack, balance-train
 *   (the last three take true|false).
 */
MIRISK_API mirisk_status mirisk_config_set(mirisk_config* config,
                                           const char* key, const char* value);

/* ---- Pipeline ----------------------------------------------------------- */

/*
 * Runs the full evaluation and writes every artifact into the configured
 * output directory. Nothing is written when the run fails.
 */
MIRISK_API mirisk_status mirisk_run(const mirisk_config* config,
                                    mirisk_report** report);

/* report.json contents. */
MIRISK_API const char* mirisk_report_json(const mirisk_report* report);
/* 0 when no risk flag fired, 2 otherwise. */
MIRISK_API int mirisk_report_exit_code(const mirisk_report* report);
MIRISK_API void mirisk_report_free(mirisk_report* report);

/*
 * Realistic attack vs method 1 comparison of an existing report.json.
 * *json receives a string to release with mirisk_string_free.
 */
MIRISK_API mirisk_status mirisk_compare_report(const char* report_path,
                                               char** json);
MIRISK_API void mirisk_string_free(char* str);

/* ---- Primitives --------------------------------------------------------- */

/* Gaussian KDE. bandwidth 0 selects Scott's rule; negative is an error. */
MIRISK_API mirisk_status mirisk_kde_fit(const double* samples, size_t count,
                                        double bandwidth, mirisk_kde** kde);
MIRISK_API double mirisk_kde_eval(const mirisk_kde* kde, double x);
MIRISK_API double mirisk_kde_bandwidth(const mirisk_kde* kde);
MIRISK_API void mirisk_kde_free(mirisk_kde* kde);

/* P(member | d) from the two class densities at d and the member prior.
 * NaN when a density is negative or non-finite or the prior is outside
 * (0, 1). */
MIRISK_API double mirisk_posterior(double member_density,
                                   double non_member_density,
                                   double prior_member);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* MIRISK_MIRISK_H_ */
