#ifndef MUTSCHED_H
#define MUTSCHED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum MsStatus {
  MS_STATUS_OK = 0,
  // A required pointer argument was null.
  MS_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  MS_STATUS_INVALID_UTF8 = 2,
  // The model text could not be parsed or failed validation.
  MS_STATUS_PARSE_ERROR = 3,
  // An argument was out of range or could not be parsed.
  MS_STATUS_INVALID_ARGUMENT = 4,
  // A file could not be read.
  MS_STATUS_IO_ERROR = 5,
  // The model could not be simulated.
  MS_STATUS_SIMULATION_ERROR = 6,
  // The operator selection enables no operator.
  MS_STATUS_EMPTY_OPERATOR_SET = 7,
  // Mutant enumeration or application failed.
  MS_STATUS_MUTATION_ERROR = 8,
  // The campaign could not be evaluated.
  MS_STATUS_ANALYSIS_ERROR = 9,
  // The campaign has no mutants, so its score is undefined.
  MS_STATUS_UNDEFINED_SCORE = 10,
  // An internal error was caught at the boundary.
  MS_STATUS_PANIC = 11,
} MsStatus;

// A parsed and validated system model.
typedef struct MsModel MsModel;

// The result of a mutation campaign.
typedef struct MsReport MsReport;

// A simulation trace.
typedef struct MsTrace MsTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static NUL-terminated string.
const char *ms_version(void);

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library from the same thread.
const char *ms_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ms_string_free(char *s);

// Parses a model from JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum MsStatus ms_model_parse(const char *json, struct MsModel **out);

// Reads and parses a model file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable pointer.
enum MsStatus ms_model_load(const char *path, struct MsModel **out);

// # Safety
// `model` must be null or a handle from this library not yet freed.
void ms_model_free(struct MsModel *model);

// Sets the simulated window to `[0, horizon)`. Zero is rejected.
//
// # Safety
// `model` must be a live handle.
enum MsStatus ms_model_set_horizon(struct MsModel *model, uint64_t horizon);

// Selects `"time-aware"` or `"zero-time"` semantics.
//
// # Safety
// `model` must be a live handle and `semantics` a NUL-terminated string.
enum MsStatus ms_model_set_semantics(struct MsModel *model, const char *semantics);

// Current horizon in ticks, or 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
uint64_t ms_model_horizon(const struct MsModel *model);

// Number of tasks, or 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
size_t ms_model_task_count(const struct MsModel *model);

// Simulates the model under its configured semantics.
//
// # Safety
// `model` must be a live handle and `out` a writable pointer.
enum MsStatus ms_simulate(const struct MsModel *model, struct MsTrace **out);

// # Safety
// `trace` must be null or a handle from this library not yet freed.
void ms_trace_free(struct MsTrace *trace);

// Number of scheduler events, or 0 for a null handle.
//
// # Safety
// `trace` must be null or a live handle.
size_t ms_trace_event_count(const struct MsTrace *trace);

// Number of deadline misses, or 0 for a null handle.
//
// # Safety
// `trace` must be null or a live handle.
size_t ms_trace_deadline_misses(const struct MsTrace *trace);

// Event log as TSV: `time kind task runnable instance`.
//
// # Safety
// `trace` must be a live handle and `out` a writable pointer.
enum MsStatus ms_trace_events_tsv(const struct MsTrace *trace, char **out);

// Data-store accesses as TSV.
//
// # Safety
// `trace` must be a live handle and `out` a writable pointer.
enum MsStatus ms_trace_accesses_tsv(const struct MsTrace *trace, char **out);

// Runnable outputs as TSV.
//
// # Safety
// `trace` must be a live handle and `out` a writable pointer.
enum MsStatus ms_trace_outputs_tsv(const struct MsTrace *trace, char **out);

// Execution segments as CSV: `task,start,end,runnable`.
//
// # Safety
// `trace` must be a live handle and `out` a writable pointer.
enum MsStatus ms_trace_gantt_csv(const struct MsTrace *trace, char **out);

// Gantt chart as a standalone SVG document.
//
// # Safety
// `trace` must be a live handle and `out` a writable pointer.
enum MsStatus ms_trace_gantt_svg(const struct MsTrace *trace, char **out);

// R/W pattern of one data store, e.g. `WRWR`.
//
// # Safety
// `trace` must be a live handle, `store` a NUL-terminated string and `out`
// a writable pointer.
enum MsStatus ms_trace_access_sequence(const struct MsTrace *trace, const char *store, char **out);

// Mutant manifest, one `id operator target argument` line per mutant.
//
// `ops` selects operators as on the command line (`mITO`, `period`, `all`,
// `none`, comma-separated); null means all. `deltas` applies to every
// parameterized class; an empty list uses the defaults.
//
// # Safety
// `model` must be a live handle, `ops` null or a NUL-terminated string,
// `deltas` valid for `deltas_len` reads and `out` a writable pointer.
enum MsStatus ms_mutate_manifest(const struct MsModel *model,
                                 const char *ops,
                                 const uint64_t *deltas_ptr,
                                 size_t deltas_len,
                                 char **out);

// Runs a mutation campaign.
//
// `ops` and the δ list are as for [`ms_mutate_manifest`]. `oracles` lists
// kill oracles (`deadline`, `access`, `output`, `all`); null means all.
// `baseline` is `"same"` or `"zero-time"`; null means same. `threads` of 0
// uses one worker per core.
//
// # Safety
// Pointer arguments must be null where allowed, otherwise valid as
// described above; `out` must be writable.
enum MsStatus ms_campaign(const struct MsModel *model,
                          const char *ops,
                          const uint64_t *deltas_ptr,
                          size_t deltas_len,
                          const char *oracles,
                          const char *baseline,
                          size_t threads,
                          struct MsReport **out);

// # Safety
// `report` must be null or a handle from this library not yet freed.
void ms_report_free(struct MsReport *report);

// Per-class CSV with a closing total row.
//
// # Safety
// `report` must be a live handle and `out` a writable pointer.
enum MsStatus ms_report_csv(const struct MsReport *report, char **out);

// Aligned text table followed by the score line.
//
// # Safety
// `report` must be a live handle and `out` a writable pointer.
enum MsStatus ms_report_table(const struct MsReport *report, char **out);

// Per-mutant verdicts as TSV.
//
// # Safety
// `report` must be a live handle and `out` a writable pointer.
enum MsStatus ms_report_details(const struct MsReport *report, char **out);

// Killed and total mutant counts. Returns `UndefinedScore` for a campaign
// without mutants; the counts are still written.
//
// # Safety
// `report` must be a live handle; `kills` and `mutants` writable.
enum MsStatus ms_report_score(const struct MsReport *report, uint64_t *kills, uint64_t *mutants);

// Score as text: `64.71%`, or `—` when undefined.
//
// # Safety
// `report` must be a live handle and `out` a writable pointer.
enum MsStatus ms_report_score_text(const struct MsReport *report, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUTSCHED_H */
