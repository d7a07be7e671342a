/* edgepart C API. Regenerate with: cbindgen --crate edgepart-ffi -o include/edgepart.h */

#ifndef EDGEPART_H
#define EDGEPART_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum EpStatus {
  EP_OK = 0,
  EP_NULL_POINTER = 1,
  EP_INVALID_ARGUMENT = 2,
  EP_IO = 3,
  EP_PARSE = 4,
  EP_UNBALANCED = 5,
  EP_INTERNAL = 6,
} EpStatus;

// Opaque graph handle.
typedef struct EpGraph EpGraph;

// Opaque partition handle; owns a reference to its graph.
typedef struct EpPartition EpPartition;

// Refinement summary written by `ep_refine_lsg` / `ep_refine_lsf`.
typedef struct EpRefineStats {
  double rf_before;
  double rf_after;
  uint64_t copies_before;
  uint64_t copies_after;
  uint64_t rounds;
  uint64_t adjust_success;
  uint64_t adjust_failed;
  uint64_t blocks_applied;
  uint64_t blocks_reverted;
  uint64_t wall_time_ms;
} EpRefineStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message for this thread, as a newly allocated C string the
// caller must release with [`ep_string_free`]. Null if no error occurred.
char *ep_last_error_message(void);

// Release a string returned by this library.
//
// # Safety
// `s` must be null or a pointer previously returned by
// [`ep_last_error_message`], not yet freed.
void ep_string_free(char *s);

// Load and normalize an edge-list file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum EpStatus ep_graph_load_file(const char *path, struct EpGraph **out);

// Build a graph from `m` edges given as `2m` endpoint ids.
//
// # Safety
// `endpoints` must point to `2 * m` readable u64 values; `out` must be
// a valid pointer.
enum EpStatus ep_graph_from_edges(uint64_t n,
                                  const uint64_t *endpoints,
                                  uint64_t m,
                                  struct EpGraph **out);

// Write the normalized edge list of a graph.
//
// # Safety
// `graph` must be a live handle; `path` a NUL-terminated string.
enum EpStatus ep_graph_save_file(const struct EpGraph *graph, const char *path);

// # Safety
// `graph` must be null or a live handle from this library, not yet freed.
void ep_graph_free(struct EpGraph *graph);

// # Safety
// `graph` must be a live handle (returns 0 on null).
uint64_t ep_graph_vertex_count(const struct EpGraph *graph);

// # Safety
// `graph` must be a live handle (returns 0 on null).
uint64_t ep_graph_edge_count(const struct EpGraph *graph);

// # Safety
// `graph` must be a live handle (returns NaN on null).
double ep_graph_average_degree(const struct EpGraph *graph);

// Seeded random balanced partition (shuffle + round-robin deal).
// `alpha_millis` is the balance parameter in thousandths (1100 = 1.1).
//
// # Safety
// `graph` must be a live handle and `out` a valid pointer.
enum EpStatus ep_partition_random(const struct EpGraph *graph,
                                  uint64_t k,
                                  uint64_t alpha_millis,
                                  uint64_t seed,
                                  struct EpPartition **out);

// Deterministic baseline partition: edge id modulo k.
//
// # Safety
// `graph` must be a live handle and `out` a valid pointer.
enum EpStatus ep_partition_hash(const struct EpGraph *graph,
                                uint64_t k,
                                uint64_t alpha_millis,
                                struct EpPartition **out);

// Read a partition file (either supported format) against a graph. The
// part count comes from the file header, or the largest part id plus one.
//
// # Safety
// `graph` must be a live handle, `path` a NUL-terminated string, `out`
// a valid pointer.
enum EpStatus ep_partition_load_file(const struct EpGraph *graph,
                                     const char *path,
                                     uint64_t alpha_millis,
                                     struct EpPartition **out);

// Build a partition from an explicit edge-to-part array of length m.
//
// # Safety
// `assign` must point to `len` readable u64 values; `graph` must be a
// live handle and `out` a valid pointer.
enum EpStatus ep_partition_from_assignment(const struct EpGraph *graph,
                                           uint64_t k,
                                           uint64_t alpha_millis,
                                           const uint64_t *assign,
                                           uint64_t len,
                                           struct EpPartition **out);

// Write the partition in the primary file format (k= header plus one
// part id per edge line).
//
// # Safety
// `partition` must be a live handle; `path` a NUL-terminated string.
enum EpStatus ep_partition_save_file(const struct EpPartition *partition, const char *path);

// # Safety
// `partition` must be null or a live handle, not yet freed.
void ep_partition_free(struct EpPartition *partition);

// # Safety
// `partition` must be a live handle (returns NaN on null).
double ep_partition_replication_factor(const struct EpPartition *partition);

// # Safety
// `partition` must be a live handle (returns 0 on null).
uint64_t ep_partition_copies(const struct EpPartition *partition);

// # Safety
// `partition` must be a live handle (returns 0 on null).
uint64_t ep_partition_part_count(const struct EpPartition *partition);

// Per-part edge capacity, ceil(alpha * m / k).
//
// # Safety
// `partition` must be a live handle (returns 0 on null).
uint64_t ep_partition_capacity(const struct EpPartition *partition);

// # Safety
// `partition` must be a live handle (returns false on null).
bool ep_partition_is_balanced(const struct EpPartition *partition);

// Run the greedy refiner in place. The partition must be balanced.
//
// # Safety
// `partition` must be a live handle; `stats` may be null.
enum EpStatus ep_refine_lsg(struct EpPartition *partition,
                            uint64_t seed,
                            struct EpRefineStats *stats);

// Run the flow-based refiner in place. Zero-valued knobs pick defaults:
// 200*k rounds, 50 stagnation rounds, a 60 s budget.
//
// # Safety
// `partition` must be a live handle; `stats` may be null.
enum EpStatus ep_refine_lsf(struct EpPartition *partition,
                            uint64_t seed,
                            uint64_t max_rounds,
                            uint64_t stagnation_rounds,
                            uint64_t time_budget_ms,
                            struct EpRefineStats *stats);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EDGEPART_H */
