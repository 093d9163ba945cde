/*
 * permlm — permutation-based inference for two-predictor linear regression.
 *
 * C interface to the shared library. All functions return a plm_status;
 * plm_last_error() describes the most recent failure on the calling
 * thread. Strings returned through char** out-parameters are owned by the
 * caller and must be released with plm_string_free().
 */
#ifndef PERMLM_H
#define PERMLM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plm_status {
  PLM_OK = 0,
  PLM_ERR_INVALID_ARGUMENT,
  PLM_ERR_DIMENSION_MISMATCH,
  PLM_ERR_RANK_DEFICIENT,
  PLM_ERR_ZERO_STANDARD_ERROR,
  PLM_ERR_DEGENERATE_SCHEME,
  PLM_ERR_EMPTY_DISTRIBUTION,
  PLM_ERR_OVERFLOW,
  PLM_ERR_SPACE_TOO_LARGE,
  PLM_ERR_INVALID_REGIME,
  PLM_ERR_FILE_NOT_FOUND,
  PLM_ERR_MISSING_COLUMN,
  PLM_ERR_NON_NUMERIC,
  PLM_ERR_ALL_ROWS_DROPPED,
  PLM_ERR_PARSE,
  PLM_ERR_INTERNAL
} plm_status;

const char* plm_version(void);

/* Message for the last error raised on this thread; empty string if none. */
const char* plm_last_error(void);

void plm_string_free(char* s);

/* ---- datasets -------------------------------------------------------- */

typedef struct plm_dataset plm_dataset;

/* family may be NULL (no clustering); when present it is an array of n
 * NUL-terminated labels. */
plm_status plm_dataset_create(const double* y, const double* x1,
                              const double* x2, const char* const* family,
                              size_t n, plm_dataset** out);

/* CSV with a header row; family_column may be NULL. A treatment column
 * holding two distinct string labels is mapped to 0/1 in first-seen
 * order. */
plm_status plm_dataset_from_csv(const char* path, const char* response,
                                const char* covariate, const char* treatment,
                                const char* family_column, plm_dataset** out);

void plm_dataset_free(plm_dataset* d);

size_t plm_dataset_rows(const plm_dataset* d);

/* ---- direct numeric entry points ------------------------------------- */

/* Full-model fit y ~ 1 + x1 + x2. Arrays must hold 3 doubles. t_x2/p_x2
 * are the treatment t-statistic and its two-sided classical p-value. */
plm_status plm_fit_full(const plm_dataset* d, double* coefficients,
                        double* standard_errors, double* t_x2, double* p_x2);

plm_status plm_t_cdf(double t, long df, double* out);

/* Wilson score interval. */
plm_status plm_proportion_ci(uint64_t successes, uint64_t trials,
                             double level, double* low, double* high);

/* scenario: "independent" | "homogeneous" | "heterogeneous". */
plm_status plm_permutation_space_size(const plm_dataset* d,
                                      const char* scenario, uint64_t* out);

/* ---- JSON pipelines --------------------------------------------------- */

/* config_json (all fields optional):
 *   {"methods": ["draper-stoneman","manly","freedman-lane","terbraak",
 *                "ols"] or ["all"],
 *    "permutations": 2000, "seed": 1, "cluster_mode": "auto"}
 * Produces {"provenance", "diagnostics", "rows": [...]}. */
plm_status plm_analyze(const plm_dataset* d, const char* config_json,
                       char** report_json);

/* configs_json: JSON array of simulation rows (see README). */
plm_status plm_simulate(const char* configs_json, char** report_json);

/* options_json (all fields optional):
 *   {"seed": N, "tolerance_rho": 0.05, "tolerance_var": 0.05} */
plm_status plm_verify(const char* options_json, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* PERMLM_H */
