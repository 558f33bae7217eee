#ifndef POTENTIAL_H
#define POTENTIAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define POT_POINT_WEIGHTS_UNIT 0

#define POT_POINT_WEIGHTS_OPPOSITE_DISTANCE 1

#define POT_ATTRIBUTE_WEIGHTS_UNIT 0

#define POT_ATTRIBUTE_WEIGHTS_ONE_MINUS_P_VALUE 1

#define POT_ATTRIBUTE_WEIGHTS_ABS_CORRELATION 2

/**
 * Result code of every fallible call.
 */
typedef enum PotStatus {
  POT_STATUS_OK = 0,
  POT_STATUS_NULL_POINTER = 1,
  POT_STATUS_INVALID_ARGUMENT = 2,
  POT_STATUS_DIMENSION_MISMATCH = 3,
  POT_STATUS_MISSING_CLASS = 4,
  POT_STATUS_DUPLICATE_POINT = 5,
  POT_STATUS_AMBIGUOUS_SINGULARITY = 6,
  POT_STATUS_INSUFFICIENT_SAMPLES = 7,
  POT_STATUS_INVALID_K = 8,
  POT_STATUS_IO = 9,
  POT_STATUS_PARSE = 10,
  POT_STATUS_CONVERGENCE_FAILURE = 11,
  POT_STATUS_PANIC = 12,
} PotStatus;

/**
 * Opaque labeled dataset.
 */
typedef struct PotDataset PotDataset;

/**
 * Opaque trained model.
 */
typedef struct PotModel PotModel;

/**
 * Exponents and weighting scheme of a model.
 */
typedef struct PotModelConfig {
  double p;
  double alpha;
  double beta;
  double epsilon;
  /**
   * One of the `POT_POINT_WEIGHTS_*` constants.
   */
  uint32_t point_weights;
  /**
   * One of the `POT_ATTRIBUTE_WEIGHTS_*` constants.
   */
  uint32_t attribute_weights;
} PotModelConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pot_last_error(void);

/**
 * Library version as a NUL-terminated string with static lifetime.
 */
const char *pot_version(void);

/**
 * Copies `n` rows of `dim` features (row-major) and `n` labels (`+1` or
 * `-1`) into a new dataset.
 *
 * # Safety
 * `features` must point to `n * dim` doubles, `labels` to `n` ints and
 * `out` to writable storage for one pointer.
 */
enum PotStatus pot_dataset_new(const double *features,
                               const int32_t *labels,
                               size_t n,
                               size_t dim,
                               struct PotDataset **out);

/**
 * Reads a dataset CSV (header row, label column `label`).
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum PotStatus pot_dataset_load_csv(const char *path, struct PotDataset **out);

/**
 * Uniform checkerboard sample of `count` points.
 *
 * # Safety
 * `out` must be writable.
 */
enum PotStatus pot_dataset_checkerboard(uint64_t seed, size_t count, struct PotDataset **out);

/**
 * Number of rows; 0 for a null handle.
 *
 * # Safety
 * `data` must be null or a live dataset handle.
 */
size_t pot_dataset_len(const struct PotDataset *data);

/**
 * Number of features per row; 0 for a null handle.
 *
 * # Safety
 * `data` must be null or a live dataset handle.
 */
size_t pot_dataset_dim(const struct PotDataset *data);

/**
 * # Safety
 * `data` must be null or a handle not yet freed.
 */
void pot_dataset_free(struct PotDataset *data);

/**
 * Fits weights on `data` and freezes them into a model.
 *
 * # Safety
 * `data` must be a live dataset handle, `config` readable and `out`
 * writable.
 */
enum PotStatus pot_model_build(const struct PotDataset *data,
                               const struct PotModelConfig *config,
                               struct PotModel **out);

/**
 * # Safety
 * `model` must be null or a live model handle.
 */
size_t pot_model_dim(const struct PotModel *model);

/**
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void pot_model_free(struct PotModel *model);

/**
 * Classifies one query of `len` features. `label` receives `+1` or `-1`;
 * `potential` and `exact_hit` may be null.
 *
 * # Safety
 * `x` must point to `len` doubles; non-null outputs must be writable.
 */
enum PotStatus pot_model_classify(const struct PotModel *model,
                                  const double *x,
                                  size_t len,
                                  int32_t *label,
                                  double *potential,
                                  bool *exact_hit);

/**
 * Classifies `n` queries of `dim` features (row-major) in parallel.
 * `labels` receives `n` values; `potentials` may be null.
 *
 * # Safety
 * `xs` must point to `n * dim` doubles, `labels` to `n` writable ints and
 * `potentials` to null or `n` writable doubles.
 */
enum PotStatus pot_model_classify_batch(const struct PotModel *model,
                                        const double *xs,
                                        size_t n,
                                        size_t dim,
                                        int32_t *labels,
                                        double *potentials);

/**
 * Fraction of `test` rows the model labels correctly.
 *
 * # Safety
 * Handles must be live and `accuracy` writable.
 */
enum PotStatus pot_holdout_accuracy(const struct PotModel *model,
                                    const struct PotDataset *test,
                                    double *accuracy);

/**
 * Leave-one-out accuracy with selection and weights refit per fold.
 * `top_k == 0` disables feature selection.
 *
 * # Safety
 * `data` must be live, `config` readable and `accuracy` writable.
 */
enum PotStatus pot_loocv_accuracy(const struct PotDataset *data,
                                  const struct PotModelConfig *config,
                                  size_t top_k,
                                  double *accuracy);

/**
 * Welch two-sided p-value of every attribute. `out_len` must equal the
 * dataset dimension.
 *
 * # Safety
 * `data` must be live and `out` point to `out_len` writable doubles.
 */
enum PotStatus pot_welch_p_values(const struct PotDataset *data, double *out, size_t out_len);

/**
 * Indices of the `k` attributes with the smallest p-values, best first.
 *
 * # Safety
 * `data` must be live and `out` point to `k` writable values.
 */
enum PotStatus pot_select_top_features(const struct PotDataset *data, size_t k, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POTENTIAL_H */
