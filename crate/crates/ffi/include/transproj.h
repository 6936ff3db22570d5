#ifndef TRANSPROJ_H
#define TRANSPROJ_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the values match the command-line exit codes where both
 * exist.
 */
typedef enum TpStatus {
  TP_STATUS_OK = 0,
  /**
   * The call ran but its report says `"ok": false`.
   */
  TP_STATUS_FAILED = 1,
  /**
   * Malformed input or a violated precondition.
   */
  TP_STATUS_INVALID = 2,
  TP_STATUS_NEEDS_EXTENSION = 3,
  TP_STATUS_BUDGET_EXCEEDED = 4,
  TP_STATUS_NULL_ARGUMENT = 5,
  TP_STATUS_INVALID_UTF8 = 6,
  /**
   * A bug: the library panicked.
   */
  TP_STATUS_PANIC = 7,
} TpStatus;

/**
 * A parsed session document.
 */
typedef struct TpSession TpSession;

/**
 * A projective triple `(α, β, γ)` with its section.
 */
typedef struct TpTriple TpTriple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *tp_version(void);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *tp_last_error(void);

/**
 * Free a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tp_string_free(char *s);

/**
 * Parse a JSON session document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` a valid pointer.
 */
enum TpStatus tp_session_parse(const char *json, struct TpSession **out_session);

/**
 * # Safety
 * `session` must come from [`tp_session_parse`] (or be null).
 */
void tp_session_free(struct TpSession *session);

/**
 * Run a verb on a session. `options_json` (nullable) takes the keys
 * `chart`, `extension`, `seed`, `component`, `polar`, `degree`. The JSON
 * report (or diagnostic) is written to `out_report` in every case except
 * null arguments, and must be freed with [`tp_string_free`].
 *
 * # Safety
 * Pointers must be valid; strings nul-terminated.
 */
enum TpStatus tp_session_run(const struct TpSession *session,
                             const char *verb,
                             const char *options_json,
                             char **out_report);

/**
 * The triple and section of a session (section `[1 : 0]` when absent).
 *
 * # Safety
 * Pointers must be valid.
 */
enum TpStatus tp_session_triple(const struct TpSession *session, struct TpTriple **out_triple);

/**
 * # Safety
 * `triple` must come from this library (or be null).
 */
void tp_triple_free(struct TpTriple *triple);

/**
 * Whether the three integrability relations hold exactly.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TpStatus tp_triple_is_integrable(const struct TpTriple *triple, bool *out_flag);

/**
 * Degree of the affine polar divisor, `Σ k · deg F`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TpStatus tp_triple_polar_degree(const struct TpTriple *triple, uint32_t *out_degree);

/**
 * Content digest of the triple (hex SHA-256 of its canonical form).
 *
 * # Safety
 * Pointers must be valid.
 */
enum TpStatus tp_triple_digest(const struct TpTriple *triple, char **out_digest);

/**
 * The triple as a JSON triple document.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TpStatus tp_triple_to_json(const struct TpTriple *triple, char **out_json);

/**
 * Normal form of `(triple, section)`; `out_transcript` (nullable)
 * receives the JSON transcript of moves.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TpStatus tp_triple_normalize(const struct TpTriple *triple,
                                  uint32_t iteration_cap,
                                  struct TpTriple **out_normal,
                                  char **out_transcript);

/**
 * `deg_polar − (deg_foliation + 2)`.
 */
int64_t tp_eccentricity(int64_t deg_polar, int64_t deg_foliation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRANSPROJ_H */
