#ifndef GCAS_H
#define GCAS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call. Codes 0 to 4 match the CLI exit codes.
typedef enum GcasStatus {
  GCAS_STATUS_OK = 0,
  // Input text could not be parsed.
  GCAS_STATUS_PARSE = 1,
  // Parameters violate a construction constraint.
  GCAS_STATUS_INVALID_PARAMS = 2,
  // The set was checked and is not complementary.
  GCAS_STATUS_NOT_GCAS = 3,
  GCAS_STATUS_INTERNAL = 4,
  GCAS_STATUS_NULL_POINTER = 5,
  GCAS_STATUS_OUT_OF_RANGE = 6,
  GCAS_STATUS_BUFFER_TOO_SMALL = 7,
} GcasStatus;

// Opaque array set.
typedef struct GcasArraySet GcasArraySet;

// Opaque verification report.
typedef struct GcasReport GcasReport;

// Builds the set described by a parameter document (JSON with a
// `"theorem"` field of `"t1"` or `"t2"`).
//
// # Safety
// `params_json` must be a NUL-terminated string and `out` a valid pointer.
// On success `*out` owns a new handle; release it with [`gcas_set_free`].
enum GcasStatus gcas_set_from_params_json(const char *params_json, struct GcasArraySet **out);

// Parses an array-set document.
//
// # Safety
// Same contract as [`gcas_set_from_params_json`].
enum GcasStatus gcas_set_from_json(const char *set_json, struct GcasArraySet **out);

// The nine-member worked example over `Z_6` with 2×8 arrays.
//
// # Safety
// `out` must be a valid pointer.
enum GcasStatus gcas_example1(struct GcasArraySet **out);

// Serializes a set as JSON. Free the string with [`gcas_string_free`].
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum GcasStatus gcas_set_to_json(const struct GcasArraySet *set, char **out);

// Number of members, or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
uintptr_t gcas_set_len(const struct GcasArraySet *set);

// Rows per member (`L1`), or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
uintptr_t gcas_set_rows(const struct GcasArraySet *set);

// Columns per member (`L2`), or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
uintptr_t gcas_set_cols(const struct GcasArraySet *set);

// Phase modulus `q`, or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
uint32_t gcas_set_modulus(const struct GcasArraySet *set);

// Copies member `index` row-major into `buf`, which must hold
// `rows * cols` values.
//
// # Safety
// `set` must be a live handle and `buf` must point to `buf_len` writable
// `uint32_t` values.
enum GcasStatus gcas_set_member(const struct GcasArraySet *set,
                                uintptr_t index,
                                uint32_t *buf,
                                uintptr_t buf_len);

// Releases a set handle. Null is ignored.
//
// # Safety
// `set` must be null or a handle not yet freed.
void gcas_set_free(struct GcasArraySet *set);

// Checks complementarity. Returns `GCAS_STATUS_OK` whenever the check ran;
// the verdict is read from the report.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer. Release the
// report with [`gcas_report_free`].
enum GcasStatus gcas_verify(const struct GcasArraySet *set, struct GcasReport **out);

// # Safety
// `report` must be null or a live handle.
bool gcas_report_is_gcas(const struct GcasReport *report);

// Autocorrelation sum at the origin. `GCAS_STATUS_NOT_GCAS` when it is not
// a rational integer.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum GcasStatus gcas_report_peak(const struct GcasReport *report, int64_t *out);

// Number of non-origin shifts with a nonzero sum.
//
// # Safety
// `report` must be null or a live handle.
uintptr_t gcas_report_nonzero_count(const struct GcasReport *report);

// Shift `(u1, u2)` of the `index`-th nonzero entry, in sorted order.
//
// # Safety
// `report` must be a live handle; `u1` and `u2` valid pointers.
enum GcasStatus gcas_report_nonzero_shift(const struct GcasReport *report,
                                          uintptr_t index,
                                          int64_t *u1,
                                          int64_t *u2);

// Multi-line text rendering of the report. Free with [`gcas_string_free`].
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum GcasStatus gcas_report_summary(const struct GcasReport *report, char **out);

// Releases a report handle. Null is ignored.
//
// # Safety
// `report` must be null or a handle not yet freed.
void gcas_report_free(struct GcasReport *report);

// Message of the last failed call on this thread, or null. The caller owns
// the copy and frees it with [`gcas_string_free`].
char *gcas_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void gcas_string_free(char *s);

#endif  /* GCAS_H */
