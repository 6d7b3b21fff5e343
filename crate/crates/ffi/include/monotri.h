#ifndef MONOTRI_H
#define MONOTRI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MonotriStatus {
  MONOTRI_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MONOTRI_STATUS_NULL_POINTER = 1,
  /**
   * An argument could not be parsed or violates a precondition.
   */
  MONOTRI_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The polynomial is reducible over Q.
   */
  MONOTRI_STATUS_REDUCIBLE = 3,
  /**
   * A factoring or search budget ran out before a verdict was reached.
   */
  MONOTRI_STATUS_UNKNOWN = 4,
  /**
   * Independent checks disagreed.
   */
  MONOTRI_STATUS_INCONSISTENT = 5,
  /**
   * The library panicked. This is a bug.
   */
  MONOTRI_STATUS_INTERNAL = 6,
} MonotriStatus;

/**
 * Tri-state answer for yes/no accessors.
 */
typedef enum MonotriTruth {
  MONOTRI_TRUTH_FALSE = 0,
  MONOTRI_TRUTH_TRUE = 1,
  /**
   * Not decided, or the handle was null.
   */
  MONOTRI_TRUTH_UNDETERMINED = -1,
} MonotriTruth;

typedef enum MonotriGalois {
  /**
   * No Galois class (the family is reducible).
   */
  MONOTRI_GALOIS_NONE = 0,
  /**
   * C_p ⋊ C_(p-1).
   */
  MONOTRI_GALOIS_FROBENIUS = 1,
  /**
   * (C_p ⋊ C_((p-1)/2)) × C_2.
   */
  MONOTRI_GALOIS_HALF_TIMES_C2 = 2,
  /**
   * (C_p ⋊ C_(p-1)) × C_2.
   */
  MONOTRI_GALOIS_FULL_TIMES_C2 = 3,
} MonotriGalois;

/**
 * Opaque result of `monotri_classify`.
 */
typedef struct MonotriClassification MonotriClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Never null. Do not
 * free.
 */
const char *monotri_last_error_message(void);

/**
 * Library version as a static string. Do not free.
 */
const char *monotri_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer returned by this library and not yet freed.
 */
void monotri_string_free(char *s);

/**
 * Classifies x^(2p) + a x^p + b^p with default settings. On success `*out`
 * receives a handle to release with `monotri_classification_free`. A
 * reducible family still succeeds; its handle reports irreducible = false.
 * A budget failure also succeeds, with monogenicity left undetermined.
 *
 * # Safety
 * `a` and `b` must be valid NUL-terminated strings, `out` a valid pointer.
 */
enum MonotriStatus monotri_classify(uint64_t p,
                                    const char *a,
                                    const char *b,
                                    struct MonotriClassification **out);

/**
 * `monotri_classify` with an explicit seed for the randomized steps.
 *
 * # Safety
 * Same as `monotri_classify`.
 */
enum MonotriStatus monotri_classify_seeded(uint64_t p,
                                           const char *a,
                                           const char *b,
                                           uint64_t seed,
                                           struct MonotriClassification **out);

/**
 * Releases a classification handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from `monotri_classify` not yet freed.
 */
void monotri_classification_free(struct MonotriClassification *h);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
enum MonotriTruth monotri_classification_irreducible(const struct MonotriClassification *h);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
enum MonotriTruth monotri_classification_monogenic(const struct MonotriClassification *h);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
enum MonotriGalois monotri_classification_galois(const struct MonotriClassification *h);

/**
 * Order of the Galois group as a decimal string, or null when the family is
 * reducible or `h` is null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
char *monotri_classification_galois_order(const struct MonotriClassification *h);

/**
 * Discriminant of f as a decimal string, or null if `h` is null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
char *monotri_classification_discriminant(const struct MonotriClassification *h);

/**
 * The classification as one JSON object, or null if `h` is null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
char *monotri_classification_to_json(const struct MonotriClassification *h);

/**
 * Whether |n| is prime, for a decimal integer n.
 *
 * # Safety
 * `n` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum MonotriStatus monotri_is_prime(const char *n, enum MonotriTruth *out);

/**
 * Monogenicity of a general monic trinomial x^n + A x^m + B (0 < m < n).
 * Fails with `Reducible` for a reducible trinomial and `Unknown` when its
 * discriminant could not be factored within budget.
 *
 * # Safety
 * `a` and `b` must be valid NUL-terminated strings, `out` a valid pointer.
 */
enum MonotriStatus monotri_trinomial_monogenic(uint32_t n,
                                               uint32_t m,
                                               const char *a,
                                               const char *b,
                                               enum MonotriTruth *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONOTRI_H */
