#ifndef CYCLIC_RULES_H
#define CYCLIC_RULES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Bumped on any incompatible change to this interface.
 */
#define CR_ABI_VERSION 1

typedef enum CrStatus {
  CR_STATUS_OK = 0,
  CR_STATUS_NULL_POINTER = 1,
  CR_STATUS_INVALID_UTF8 = 2,
  CR_STATUS_PARSE = 3,
  CR_STATUS_INVALID_ARGUMENT = 4,
  CR_STATUS_UNKNOWN_ITEM = 5,
  CR_STATUS_EMPTY_INPUT = 6,
  CR_STATUS_OUT_OF_RANGE = 7,
  CR_STATUS_UNDEFINED_CONFIDENCE = 8,
  CR_STATUS_IO = 9,
  CR_STATUS_INTERNAL = 10,
} CrStatus;

typedef enum CrFormat {
  CR_FORMAT_FIMI = 0,
  CR_FORMAT_FIMI_QUANTIFIED = 1,
  CR_FORMAT_CSV_TIMESTAMPED = 2,
} CrFormat;

typedef enum CrAlgorithm {
  CR_ALGORITHM_SEQUENTIAL = 0,
  CR_ALGORITHM_INTERLEAVED = 1,
  CR_ALGORITHM_PCAR = 2,
  CR_ALGORITHM_CBCAR = 3,
} CrAlgorithm;

typedef struct CrConstraints CrConstraints;

typedef struct CrDatabase CrDatabase;

typedef struct CrRuleSet CrRuleSet;

/**
 * Mining thresholds; see `cr_params_default`.
 */
typedef struct CrParams {
  double minsupp;
  double minconf;
  size_t nb_partitions;
  /**
   * pcar/cbcar.
   */
  uint32_t cycle_length;
  /**
   * sequential/interleaved.
   */
  uint32_t l_min;
  uint32_t l_max;
  bool allow_empty_premise;
  bool all_cycles;
} CrParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Interface version this library was built with.
 */
uint32_t cr_abi_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next failing call on the same thread.
 */
const char *cr_last_error_message(void);

struct CrParams cr_params_default(void);

/**
 * Parses `len` bytes of transaction text into a new database.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum CrStatus cr_database_parse(const uint8_t *data,
                                size_t len,
                                enum CrFormat format,
                                uint32_t units_per_group,
                                struct CrDatabase **out);

/**
 * # Safety
 * `db` must be NULL or a handle from `cr_database_parse` not yet freed.
 */
void cr_database_free(struct CrDatabase *db);

/**
 * Number of transactions, or 0 for NULL.
 *
 * # Safety
 * `db` must be NULL or a live handle.
 */
size_t cr_database_transaction_count(const struct CrDatabase *db);

/**
 * # Safety
 * `db` must be NULL or a live handle.
 */
uint32_t cr_database_unit_count(const struct CrDatabase *db);

/**
 * Size of the item id universe (largest id + 1).
 *
 * # Safety
 * `db` must be NULL or a live handle.
 */
uint32_t cr_database_item_count(const struct CrDatabase *db);

/**
 * An empty (unconstrained) constraint set.
 */
struct CrConstraints *cr_constraints_new(void);

/**
 * # Safety
 * `cs` must be NULL or a handle from `cr_constraints_new` not yet freed.
 */
void cr_constraints_free(struct CrConstraints *cs);

/**
 * Restricts premises to the given items; `len == 0` lifts the restriction.
 *
 * # Safety
 * `cs` must be a live handle; `items` must point to `len` ids.
 */
enum CrStatus cr_constraints_set_premise(struct CrConstraints *cs,
                                         const uint32_t *items,
                                         size_t len);

/**
 * Restricts conclusions to the given items; `len == 0` lifts the restriction.
 *
 * # Safety
 * `cs` must be a live handle; `items` must point to `len` ids.
 */
enum CrStatus cr_constraints_set_conclusion(struct CrConstraints *cs,
                                            const uint32_t *items,
                                            size_t len);

/**
 * Adds an aggregate constraint written like `SUM(0)>=1`.
 *
 * # Safety
 * `cs` must be a live handle; `expr` a NUL-terminated string.
 */
enum CrStatus cr_constraints_add_aggregate(struct CrConstraints *cs, const char *expr);

/**
 * Mines `db`. `constraints` may be NULL and must be NULL or empty for
 * algorithms other than cbcar.
 *
 * # Safety
 * `db` and `params` must be valid; `constraints` NULL or live; `out`
 * writable.
 */
enum CrStatus cr_mine(const struct CrDatabase *db,
                      enum CrAlgorithm algorithm,
                      const struct CrParams *params,
                      const struct CrConstraints *constraints,
                      struct CrRuleSet **out);

/**
 * # Safety
 * `rules` must be NULL or a handle from `cr_mine` not yet freed.
 */
void cr_ruleset_free(struct CrRuleSet *rules);

/**
 * Number of rules, or 0 for NULL.
 *
 * # Safety
 * `rules` must be NULL or a live handle.
 */
size_t cr_ruleset_len(const struct CrRuleSet *rules);

/**
 * Scan-effort counters of the run that produced `rules`.
 *
 * # Safety
 * `rules` must be a live handle; the out pointers writable.
 */
enum CrStatus cr_ruleset_counters(const struct CrRuleSet *rules,
                                  uint64_t *transactions_touched,
                                  uint64_t *units_evaluated);

/**
 * Support and confidence of rule `index`.
 *
 * # Safety
 * `rules` must be a live handle; the out pointers writable.
 */
enum CrStatus cr_rule_measures(const struct CrRuleSet *rules,
                               size_t index,
                               double *support,
                               double *confidence);

/**
 * Borrowed view of the premise ids of rule `index`, valid while `rules`
 * lives. An empty premise yields `*len == 0`.
 *
 * # Safety
 * `rules` must be a live handle; the out pointers writable.
 */
enum CrStatus cr_rule_premise(const struct CrRuleSet *rules,
                              size_t index,
                              const uint32_t **items,
                              size_t *len);

/**
 * Borrowed view of the conclusion ids of rule `index`.
 *
 * # Safety
 * As for `cr_rule_premise`.
 */
enum CrStatus cr_rule_conclusion(const struct CrRuleSet *rules,
                                 size_t index,
                                 const uint32_t **items,
                                 size_t *len);

/**
 * Number of cycles of rule `index`, or 0 when out of range.
 *
 * # Safety
 * `rules` must be NULL or a live handle.
 */
size_t cr_rule_cycle_count(const struct CrRuleSet *rules, size_t index);

/**
 * Cycle `cycle` of rule `index` as `(length, offset)`.
 *
 * # Safety
 * `rules` must be a live handle; the out pointers writable.
 */
enum CrStatus cr_rule_cycle(const struct CrRuleSet *rules,
                            size_t index,
                            size_t cycle,
                            uint32_t *length,
                            uint32_t *offset);

/**
 * The rules as a JSON array, or NULL on failure. Release with
 * `cr_string_free`.
 *
 * # Safety
 * `rules` must be a live handle.
 */
char *cr_ruleset_to_json(const struct CrRuleSet *rules);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void cr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLIC_RULES_H */
