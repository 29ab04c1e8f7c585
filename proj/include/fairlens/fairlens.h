/* C interface to the fairlens group-fairness audit library.
 *
 * Every function that can fail returns an fl_status. On failure the message
 * is available from fl_last_error() on the same thread until the next call.
 * Matrices are dense, row-major. Handles are opaque and owned by the caller
 * once returned; release them with the matching *_free function.
 */
#ifndef FAIRLENS_FAIRLENS_H
#define FAIRLENS_FAIRLENS_H

#include <stddef.h>
#include <stdint.h>

#if defined(FAIRLENS_BUILDING_LIBRARY)
#define FL_API __attribute__((visibility("default")))
#else
#define FL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fl_status {
  FL_OK = 0,
  FL_ERR_INVALID_ARGUMENT = 1,
  FL_ERR_IO = 2,
  FL_ERR_PARSE = 3,
  FL_ERR_DOMAIN = 4,
  FL_ERR_INTERNAL = 5
} fl_status;

FL_API const char* fl_version(void);
/* Message of the last failed call on this thread, "" if none. */
FL_API const char* fl_last_error(void);
FL_API const char* fl_status_name(fl_status status);

/* ---- metrics ---------------------------------------------------------- */

#define FL_METRIC_COUNT 13

typedef struct fl_confusion {
  uint64_t tp;
  uint64_t fp;
  uint64_t tn;
  uint64_t fn;
} fl_confusion;

/* Canonical metric name for index 0..12, NULL when out of range. */
FL_API const char* fl_metric_name(size_t index);

/* Scores >= t are predicted positive. Labels are 0 or 1. */
FL_API fl_status fl_confusion_at_threshold(const double* scores, const int* labels, size_t n, double t,
                                           fl_confusion* out);

/* Fills 13 values in canonical order and 13 imputation flags. */
FL_API fl_status fl_metric_vector(const fl_confusion* counts, double auc, int auc_imputed, uint64_t n_total,
                                  double* values, int* imputed);

/* Fails with FL_ERR_DOMAIN when the labels hold a single class. */
FL_API fl_status fl_roc_auc(const double* scores, const int* labels, size_t n, double* auc);

FL_API fl_status fl_select_threshold(const double* scores, const int* labels, size_t n, double* threshold,
                                     double* balanced_accuracy, int* fallback);

/* ---- clustering ------------------------------------------------------- */

typedef enum fl_axis { FL_AXIS_COLUMNS = 0, FL_AXIS_ROWS = 1 } fl_axis;

typedef struct fl_merge {
  size_t left;
  size_t right;
  double height;
  size_t size;
} fl_merge;

/* 1 - Pearson distances between the items along `axis`, condensed into
 * `out`, which holds n(n-1)/2 entries for n items. */
FL_API fl_status fl_correlation_distance(const double* matrix, size_t rows, size_t cols, fl_axis axis, double* out);

/* UPGMA over a condensed vector of n items; `merges` holds n-1 entries.
 * Leaves are nodes 0..n-1 and merge i creates node n+i. */
FL_API fl_status fl_upgma(const double* condensed, size_t n, fl_merge* merges);

/* ---- PCA -------------------------------------------------------------- */

typedef struct fl_pca fl_pca;

FL_API fl_status fl_pca_fit(const double* matrix, size_t rows, size_t cols, size_t k, fl_pca** out);
FL_API size_t fl_pca_components(const fl_pca* pca);
FL_API size_t fl_pca_dimension(const fl_pca* pca);
/* `out` holds fl_pca_components() ratios. */
FL_API fl_status fl_pca_ratios(const fl_pca* pca, double* out);
/* `out` holds components x dimension entries, one eigenvector per row. */
FL_API fl_status fl_pca_eigenvectors(const fl_pca* pca, double* out);
/* `out` holds rows x components scores. */
FL_API fl_status fl_pca_project(const fl_pca* pca, const double* matrix, size_t rows, size_t cols, double* out);
FL_API void fl_pca_free(fl_pca* pca);

/* ---- audit bundles ---------------------------------------------------- */

typedef struct fl_bundle fl_bundle;

/* Runs the full pipeline for a run config file. `overrides_json` (nullable)
 * is a JSON object with any of: folds, seeds, validation_fraction, models,
 * search_draws, jobs, plot_models, paper_scale, verbose. A bundle is
 * returned even when some cells failed; check fl_bundle_complete(). */
FL_API fl_status fl_run(const char* config_path, const char* overrides_json, fl_bundle** out);

/* Audits external predictions described by an audit config JSON document.
 * Relative file paths resolve against `base_dir` (nullable: current dir). */
FL_API fl_status fl_audit(const char* audit_json, const char* base_dir, fl_bundle** out);

FL_API fl_status fl_bundle_load(const char* path, fl_bundle** out);
FL_API fl_status fl_bundle_recluster(fl_bundle* bundle);
/* Both arguments nullable; `plot_models_csv` is a comma-separated list. */
FL_API fl_status fl_bundle_reproject(fl_bundle* bundle, const char* reference_model, const char* plot_models_csv);
/* bundle.json, failures.json, per-condition CSVs and figures. */
FL_API fl_status fl_bundle_write(const fl_bundle* bundle, const char* out_dir);
/* Per-condition CSVs and figures only. */
FL_API fl_status fl_bundle_render(const fl_bundle* bundle, const char* out_dir);
/* Release the string with fl_string_free. */
FL_API fl_status fl_bundle_to_json(const fl_bundle* bundle, char** out);

FL_API int fl_bundle_complete(const fl_bundle* bundle);
FL_API size_t fl_bundle_condition_count(const fl_bundle* bundle);
FL_API size_t fl_bundle_failure_count(const fl_bundle* bundle);
/* "dataset/feature seed k [stage]: message"; release with fl_string_free. */
FL_API fl_status fl_bundle_failure(const fl_bundle* bundle, size_t index, char** out);
FL_API size_t fl_bundle_warning_count(const fl_bundle* bundle);
FL_API fl_status fl_bundle_warning(const fl_bundle* bundle, size_t index, char** out);
FL_API void fl_bundle_free(fl_bundle* bundle);

FL_API void fl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FAIRLENS_FAIRLENS_H */
