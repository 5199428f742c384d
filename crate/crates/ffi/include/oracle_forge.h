#ifndef ORACLE_FORGE_H
#define ORACLE_FORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define OF_ABLATE_NO_ASSISTANT 1

#define OF_ABLATE_NO_FEW_SHOT (1 << 1)

#define OF_ABLATE_NO_CHAIN_OF_THOUGHT (1 << 2)

typedef enum OfDocFormat {
  OF_DOC_FORMAT_CANONICAL_JSON = 0,
  OF_DOC_FORMAT_SOURCE_COMMENTS = 1,
} OfDocFormat;

typedef enum OfStatus {
  OF_STATUS_OK = 0,
  OF_STATUS_NULL_ARGUMENT = 1,
  OF_STATUS_INVALID_UTF8 = 2,
  OF_STATUS_INVALID_ARGUMENT = 3,
  OF_STATUS_MALFORMED_DOC = 4,
  OF_STATUS_AMBIGUOUS_REFERENCE = 5,
  OF_STATUS_IO = 6,
  OF_STATUS_PROMPT_FAILED = 7,
  OF_STATUS_NO_ORACLES_FOUND = 8,
  OF_STATUS_INTERNAL = 99,
} OfStatus;

/**
 * Parsed class documentation.
 */
typedef struct OfClassDoc OfClassDoc;

/**
 * Ordered partition units of one class.
 */
typedef struct OfUnits OfUnits;

/**
 * Percentages are tenths of a percent; -1 stands for "n/a".
 */
typedef struct OfCoverage {
  int64_t precision_tenths;
  int64_t recall_tenths;
} OfCoverage;

typedef struct OfCompilability {
  int64_t compilable_tenths;
  int64_t correct_tenths;
} OfCompilability;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The caller owns
 * the returned string.
 */
char *of_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void of_string_free(char *s);

/**
 * Library version; static storage, do not free.
 */
const char *of_version(void);

/**
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum OfStatus of_class_doc_parse(const char *source,
                                 enum OfDocFormat format,
                                 struct OfClassDoc **out);

/**
 * Loads a `.json` or `.java` documentation file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum OfStatus of_class_doc_load(const char *path, struct OfClassDoc **out);

/**
 * # Safety
 * `doc` must be a live handle; `out` must be writable.
 */
enum OfStatus of_class_doc_fqcn(const struct OfClassDoc *doc, char **out);

/**
 * Canonical JSON form of the document.
 *
 * # Safety
 * `doc` must be a live handle; `out` must be writable.
 */
enum OfStatus of_class_doc_to_json(const struct OfClassDoc *doc, char **out);

/**
 * # Safety
 * `doc` must be null or a handle from this library, not yet freed.
 */
void of_class_doc_free(struct OfClassDoc *doc);

/**
 * One unit per method, or a single whole-class unit when `no_partition`.
 *
 * # Safety
 * `doc` must be a live handle; `out` must be writable.
 */
enum OfStatus of_partition(const struct OfClassDoc *doc, bool no_partition, struct OfUnits **out);

/**
 * Number of units; 0 for a null handle.
 *
 * # Safety
 * `units` must be null or a live handle.
 */
size_t of_units_len(const struct OfUnits *units);

/**
 * # Safety
 * `units` must be null or a handle from this library, not yet freed.
 */
void of_units_free(struct OfUnits *units);

/**
 * Unit id, `fqcn.signature`.
 *
 * # Safety
 * `units` must be a live handle; `out` must be writable.
 */
enum OfStatus of_units_id(const struct OfUnits *units, size_t index, char **out);

/**
 * Documentation text of the unit as it appears in the prompt.
 *
 * # Safety
 * `units` must be a live handle; `out` must be writable.
 */
enum OfStatus of_units_description(const struct OfUnits *units, size_t index, char **out);

/**
 * Renders the prompt for one unit. `ablation_flags` is a bitwise OR of the
 * `OF_ABLATE_*` constants.
 *
 * # Safety
 * `units` must be a live handle; `out` must be writable.
 */
enum OfStatus of_units_render_prompt(const struct OfUnits *units,
                                     size_t index,
                                     uint32_t ablation_flags,
                                     char **out);

/**
 * Extracts oracle methods from a model response to the unit's default
 * prompt and returns them as a JSON array of records.
 *
 * # Safety
 * `units` must be a live handle; `response` a NUL-terminated string; `out`
 * must be writable.
 */
enum OfStatus of_extract_oracles(const struct OfUnits *units,
                                 size_t index,
                                 const char *response,
                                 char **out_json);

/**
 * Precision = checked / generated, recall = generated / documented.
 *
 * # Safety
 * `out` must be writable.
 */
enum OfStatus of_coverage_from_counts(uint64_t documented,
                                      uint64_t generated,
                                      uint64_t checked,
                                      struct OfCoverage *out);

/**
 * Compilable and correct shares of `oracles`; both read 0 when there are no
 * oracles.
 *
 * # Safety
 * `out` must be writable.
 */
enum OfStatus of_compilability_from_counts(uint64_t oracles,
                                           uint64_t compilable,
                                           uint64_t correct,
                                           struct OfCompilability *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORACLE_FORGE_H */
