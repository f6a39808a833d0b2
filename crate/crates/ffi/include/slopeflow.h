/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef SLOPEFLOW_H
#define SLOPEFLOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a fallible call.
typedef enum SfStatus {
  SF_STATUS_OK = 0,
  // A required pointer argument was null.
  SF_STATUS_NULL_POINTER = 1,
  // An argument was out of range or malformed.
  SF_STATUS_INVALID_ARGUMENT = 2,
  // The network is not connected.
  SF_STATUS_DISCONNECTED = 3,
  // No cut satisfies the requested ratio window.
  SF_STATUS_NO_ADMISSIBLE_CUT = 4,
  // A file could not be read or written.
  SF_STATUS_IO = 5,
  // The run configuration is invalid.
  SF_STATUS_CONFIG = 6,
  // The analysis failed on valid input.
  SF_STATUS_ANALYSIS = 7,
  // An internal panic was caught at the boundary.
  SF_STATUS_PANIC = 99,
} SfStatus;

// A bipartition of a network and its crossing links.
typedef struct SfCut SfCut;

// Undirected network with link capacities.
typedef struct SfNetwork SfNetwork;

// Stability analysis of a displacement series.
typedef struct SfTimeline SfTimeline;

// Cut tree of an [`SfNetwork`].
typedef struct SfTree SfTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *sf_version(void);

// Copies the last failure message of the calling thread into `buf`
// (truncated and always NUL-terminated when `len > 0`) and returns the
// buffer size needed for the whole message including the terminator.
// The message is empty after a successful call.
//
// # Safety
// `buf` must be null or point to at least `len` writable bytes.
size_t sf_last_error(char *buf, size_t len);

// Builds a network on nodes `0..n` from `m` links `(lo[k], hi[k])` with
// capacities `capacity[k]`. Link order does not matter.
//
// # Safety
// `lo`, `hi` and `capacity` must each point to `m` readable elements
// (they may be null when `m == 0`); `out` must be a valid pointer.
enum SfStatus sf_network_new(size_t n,
                             const size_t *lo,
                             const size_t *hi,
                             const double *capacity,
                             size_t m,
                             struct SfNetwork **out);

// Releases a network. Null is ignored.
//
// # Safety
// `net` must be null or come from [`sf_network_new`] and not be used again.
void sf_network_free(struct SfNetwork *net);

// Node count of `net`, or 0 when `net` is null.
//
// # Safety
// `net` must be null or a live network handle.
size_t sf_network_node_count(const struct SfNetwork *net);

// Maximum flow value between `source` and `sink`.
//
// # Safety
// `net` must be a live network handle and `value` a valid pointer.
enum SfStatus sf_max_flow(const struct SfNetwork *net, size_t source, size_t sink, double *value);

// Builds the cut tree of a connected network.
//
// # Safety
// `net` must be a live network handle and `out` a valid pointer.
enum SfStatus sf_tree_new(const struct SfNetwork *net, struct SfTree **out);

// Releases a cut tree. Null is ignored.
//
// # Safety
// `tree` must be null or come from [`sf_tree_new`] and not be used again.
void sf_tree_free(struct SfTree *tree);

// Minimum cut capacity between nodes `u` and `v`, read from the tree.
//
// # Safety
// `tree` must be a live tree handle and `value` a valid pointer.
enum SfStatus sf_tree_min_cut_value(const struct SfTree *tree, size_t u, size_t v, double *value);

// Least-capacity tree cut whose node-count ratio lies in
// `[rho_min, rho_max]`. Returns `SF_STATUS_NO_ADMISSIBLE_CUT` when none
// does.
//
// # Safety
// `tree` and `net` must be live handles, the tree built from that network,
// and `out` a valid pointer.
enum SfStatus sf_bottleneck(const struct SfTree *tree,
                            const struct SfNetwork *net,
                            double rho_min,
                            double rho_max,
                            struct SfCut **out);

// Releases a cut. Null is ignored.
//
// # Safety
// `cut` must be null or come from [`sf_bottleneck`] and not be used again.
void sf_cut_free(struct SfCut *cut);

// Capacity of `cut`, or NaN when `cut` is null.
//
// # Safety
// `cut` must be null or a live cut handle.
double sf_cut_capacity(const struct SfCut *cut);

// Smaller side size over larger side size, or NaN when `cut` is null.
//
// # Safety
// `cut` must be null or a live cut handle.
double sf_cut_ratio(const struct SfCut *cut);

// Number of links crossing `cut`, or 0 when `cut` is null.
//
// # Safety
// `cut` must be null or a live cut handle.
size_t sf_cut_link_count(const struct SfCut *cut);

// Copies up to `len` node ids of the cut side `W` (increasing) into `buf`
// and returns the full size of that side. Call with `len == 0` to size the
// buffer.
//
// # Safety
// `cut` must be a live cut handle; `buf` must be null or point to `len`
// writable elements.
size_t sf_cut_side(const struct SfCut *cut, size_t *buf, size_t len);

// Loads a displacement CSV and runs the stability analysis in memory.
// `config_json` may be null for defaults; when given it uses the same
// schema as the command-line `--config` file, with `input` replaced by
// `input_path`. Nothing is written to disk.
//
// # Safety
// `input_path` must be a NUL-terminated string, `config_json` null or a
// NUL-terminated string, and `out` a valid pointer.
enum SfStatus sf_analyze_csv(const char *input_path,
                             const char *config_json,
                             struct SfTimeline **out);

// Releases a timeline. Null is ignored.
//
// # Safety
// `tl` must be null or come from [`sf_analyze_csv`] and not be used again.
void sf_timeline_free(struct SfTimeline *tl);

// Number of analyzed states, or 0 when `tl` is null.
//
// # Safety
// `tl` must be null or a live timeline handle.
size_t sf_timeline_len(const struct SfTimeline *tl);

// Series state index of analyzed entry `i`. Returns false when `i` is out
// of range.
//
// # Safety
// `tl` must be a live timeline handle and `state` a valid pointer.
bool sf_timeline_state(const struct SfTimeline *tl, size_t i, size_t *state);

// Failure resistance of analyzed entry `i`. Returns false when `i` is out
// of range or the state has no admissible cut.
//
// # Safety
// `tl` must be a live timeline handle and `value` a valid pointer.
bool sf_timeline_failure_resistance(const struct SfTimeline *tl, size_t i, double *value);

// Series state index of the regime change. Returns false when none was
// detected.
//
// # Safety
// `tl` must be a live timeline handle and `state` a valid pointer.
bool sf_timeline_regime_change(const struct SfTimeline *tl, size_t *state);

// Failure-time forecast at the last analyzed state, in state units.
// Returns false when no forecast passed the fit gate.
//
// # Safety
// `tl` must be a live timeline handle and `value` a valid pointer.
bool sf_timeline_failure_time(const struct SfTimeline *tl, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLOPEFLOW_H */
