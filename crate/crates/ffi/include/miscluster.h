#ifndef MISCLUSTER_H
#define MISCLUSTER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MisStatus {
  MIS_STATUS_OK = 0,
  MIS_STATUS_NULL_POINTER = 1,
  MIS_STATUS_INVALID_ARGUMENT = 2,
  MIS_STATUS_IO = 3,
  MIS_STATUS_INVALID_INPUT = 4,
  // The algorithm could not proceed (for example, nothing left to split).
  MIS_STATUS_ALGORITHM = 5,
  MIS_STATUS_MISSING_LABELS = 6,
  MIS_STATUS_BUFFER_TOO_SMALL = 7,
  MIS_STATUS_PANIC = 8,
} MisStatus;

// A loaded dataset.
typedef struct MisDataset MisDataset;

// A clustering of a dataset. Keeps its dataset alive.
typedef struct MisResult MisResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *mis_version(void);

// Message for the last failed call on this thread, or NULL. Valid until the
// next library call on the same thread.
const char *mis_last_error(void);

// Load a delimited file. `class_col` < 0 means the file has no class column.
//
// # Safety
// `path` must be a valid NUL-terminated string and `out` a valid pointer.
enum MisStatus mis_dataset_load(const char *path,
                                char delimiter,
                                bool has_header,
                                int64_t class_col,
                                struct MisDataset **out);

// # Safety
// `dataset` must come from `mis_dataset_load` and not be freed twice. NULL is ignored.
void mis_dataset_free(struct MisDataset *dataset);

// # Safety
// Pointers must be valid.
enum MisStatus mis_dataset_n_rows(const struct MisDataset *dataset, size_t *out);

// # Safety
// Pointers must be valid.
enum MisStatus mis_dataset_n_attributes(const struct MisDataset *dataset, size_t *out);

// Cluster into `k` groups. A shortfall still succeeds; check
// `mis_result_has_warning`.
//
// # Safety
// Pointers must be valid.
enum MisStatus mis_cluster_fixed_k(const struct MisDataset *dataset,
                                   size_t k,
                                   struct MisResult **out);

// Cluster with the automatic stopping rule and stop ratio `theta`
// (0.9 is the default used elsewhere).
//
// # Safety
// Pointers must be valid.
enum MisStatus mis_cluster_auto(const struct MisDataset *dataset,
                                double theta,
                                struct MisResult **out);

// k-modes baseline with `n_init` seeded restarts.
//
// # Safety
// Pointers must be valid.
enum MisStatus mis_kmodes(const struct MisDataset *dataset,
                          size_t k,
                          uint64_t seed,
                          size_t n_init,
                          struct MisResult **out);

// # Safety
// `result` must come from a `mis_cluster_*` call and not be freed twice. NULL is ignored.
void mis_result_free(struct MisResult *result);

// # Safety
// Pointers must be valid.
enum MisStatus mis_result_n_clusters(const struct MisResult *result, size_t *out);

// Whether a fixed-k run produced fewer clusters than requested.
//
// # Safety
// Pointers must be valid.
enum MisStatus mis_result_has_warning(const struct MisResult *result, bool *out);

// Write the cluster index of each row into `buf`, which must hold at least
// as many entries as the dataset has rows.
//
// # Safety
// `buf` must point to `len` writable `size_t` values.
enum MisStatus mis_result_assignments(const struct MisResult *result, size_t *buf, size_t len);

// Purity against the dataset's class column.
//
// # Safety
// Pointers must be valid.
enum MisStatus mis_result_purity(const struct MisResult *result, double *out);

// The result as a JSON document. Release with `mis_string_free`.
//
// # Safety
// Pointers must be valid.
enum MisStatus mis_result_to_json(const struct MisResult *result, char **out);

// Text profile of every cluster, showing the `top` most divergent
// attributes each. Release with `mis_string_free`.
//
// # Safety
// Pointers must be valid.
enum MisStatus mis_result_summary(const struct MisResult *result, size_t top, char **out);

// # Safety
// `s` must come from this library and not be freed twice. NULL is ignored.
void mis_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MISCLUSTER_H */
