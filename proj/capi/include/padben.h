/*
 * padben.h — C API for the padben benchmark library.
 *
 * All functions return a padben_status; padben_last_error() holds a
 * thread-local message for the most recent failure on the calling thread.
 * Handles are opaque and must be released with their destroy function.
 */
#ifndef PADBEN_H
#define PADBEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(_WIN64)
#define PADBEN_API __declspec(dllexport)
#else
#define PADBEN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum padben_status {
  PADBEN_OK = 0,
  PADBEN_ERR_INVALID_ARGUMENT = 1,
  PADBEN_ERR_IO = 2,
  PADBEN_ERR_PARSE = 3,
  PADBEN_ERR_TRANSPORT = 4,
  PADBEN_ERR_REFUSAL = 5,
  PADBEN_ERR_CAPABILITY = 6,
  PADBEN_ERR_DEGENERATE = 7,
  PADBEN_ERR_CHECKSUM = 8,
  PADBEN_ERR_INTERNAL = 9
} padben_status;

PADBEN_API const char* padben_version(void);

/* Message for the last error raised on this thread; empty string if none. */
PADBEN_API const char* padben_last_error(void);

/* ---- corpus file operations ------------------------------------------- */

/* Ingest one source record file (source: "paws" | "mrpc" | "hlpc") into a
 * groups JSONL file. Writes the surviving group count to *n_groups_out
 * (optional). */
PADBEN_API padben_status padben_ingest(const char* source, const char* in_path,
                                       const char* out_path, size_t* n_groups_out);

/* Merge group files and remove near-duplicates at cosine threshold theta. */
PADBEN_API padben_status padben_dedup(const char* const* in_paths, size_t n_inputs,
                                      const char* out_path, double theta, size_t* n_groups_out);

/* ---- metrics and numeric kernels ---------------------------------------- */

PADBEN_API padben_status padben_auroc(const double* scores, const int32_t* labels, size_t n,
                                      double* out);
PADBEN_API padben_status padben_tpr_at_fpr(const double* scores, const int32_t* labels, size_t n,
                                           double fpr_cap, double* out);

PADBEN_API padben_status padben_cosine_distance(const double* u, const double* v, size_t dim,
                                                double* out);
PADBEN_API padben_status padben_euclidean_distance(const double* u, const double* v, size_t dim,
                                                   double* out);
PADBEN_API padben_status padben_manhattan_distance(const double* u, const double* v, size_t dim,
                                                   double* out);

/* Jaccard similarity over lowercased word tokens. */
PADBEN_API padben_status padben_jaccard(const char* a, const char* b, double* out);

/* Character-trigram similarity used for paraphrase convergence detection. */
PADBEN_API padben_status padben_trigram_similarity(const char* a, const char* b, double* out);

/* P(AI) from 2-class logits (index 0 = AI class). */
PADBEN_API padben_status padben_radar_prob(const double* logits, size_t n, double* out);

/* Standardized detection criterion (logp_x - mu) / sigma. */
PADBEN_API padben_status padben_fastdetect_criterion(double logp_x, double mu, double sigma,
                                                     double* out);

/* ---- configured pipeline runs ------------------------------------------- */

typedef struct padben_run padben_run;

/* Open a run from a JSON config file. */
PADBEN_API padben_status padben_run_open(const char* config_path, padben_run** out);

/* Open a run from a config file with a JSON object of top-level overrides
 * (e.g. "{\"seed\": 7, \"offline\": true}"); overrides may be NULL. */
PADBEN_API padben_status padben_run_open_overrides(const char* config_path,
                                                   const char* overrides_json, padben_run** out);

/* Open the bundled offline demo: mock providers over the demo corpus in
 * data_dir, artifacts under out_dir. */
PADBEN_API padben_status padben_run_open_demo(const char* data_dir, const char* out_dir,
                                              uint64_t seed, padben_run** out);

PADBEN_API void padben_run_close(padben_run* run);

/* Run one stage: "ingest", "dedup", "generate", "qa", "build-tasks",
 * "evaluate", "analyze" or "report". *did_work_out (optional) is 1 if the
 * stage executed and 0 if it was skipped as up to date. */
PADBEN_API padben_status padben_run_stage(padben_run* run, const char* stage, int* did_work_out);

/* Run every stage in order (idempotent; failed runs resume at the failed
 * stage). */
PADBEN_API padben_status padben_run_pipeline(padben_run* run);

/* Absolute path of the run's manifest file. The returned buffer lives until
 * the next call on this run. */
PADBEN_API const char* padben_run_manifest_path(padben_run* run);

/* Standalone report over a directory of score files. */
PADBEN_API padben_status padben_report(const char* scores_dir, const char* out_dir,
                                       int group_sampling);

#ifdef __cplusplus
}
#endif

#endif /* PADBEN_H */
