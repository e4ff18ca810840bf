#ifndef CENSUS_H
#define CENSUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Orbit counting method for `census_count_orbits`.
typedef enum CensusOrbitMethod {
  CENSUS_ORBIT_METHOD_CANONICALIZE = 0,
  CENSUS_ORBIT_METHOD_BURNSIDE = 1,
} CensusOrbitMethod;

// Result of every fallible call.
typedef enum CensusStatus {
  CENSUS_STATUS_OK = 0,
  CENSUS_STATUS_INVALID_ARGUMENT = 1,
  CENSUS_STATUS_PARSE_ERROR = 2,
  CENSUS_STATUS_NOT_REDUCED = 3,
  CENSUS_STATUS_BUDGET_EXCEEDED = 4,
  CENSUS_STATUS_PROPER_POWER = 5,
  CENSUS_STATUS_SMALL_CANCELLATION = 6,
  CENSUS_STATUS_NOT_PREFIX_FREE = 7,
  CENSUS_STATUS_BELOW_RESOLUTION = 8,
  CENSUS_STATUS_TWO_TORSION_UNASSERTED = 9,
  CENSUS_STATUS_AMBIGUOUS = 10,
  CENSUS_STATUS_NOT_FOUND = 11,
  CENSUS_STATUS_NULL_POINTER = 12,
  CENSUS_STATUS_PANIC = 13,
} CensusStatus;

// A finite presentation.
typedef struct CensusPresentation CensusPresentation;

// A freely reduced word.
typedef struct CensusWord CensusWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *census_last_error(void);

// Library version as a static NUL-terminated string.
const char *census_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void census_string_free(char *s);

// Parses a word in the letter (`abAB`) or numeric (`x1 X2`) form. Without
// `reduce`, non-reduced input fails with `CENSUS_STATUS_NOT_REDUCED`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` writable.
enum CensusStatus census_word_parse(const char *text, bool reduce, struct CensusWord **out);

// # Safety
// `w` must come from this library and not have been freed. Null is ignored.
void census_word_free(struct CensusWord *w);

// Length of `w`, or 0 for null.
//
// # Safety
// `w` must be null or a live handle.
size_t census_word_length(const struct CensusWord *w);

// # Safety
// `w` must be a live handle and `out` writable.
enum CensusStatus census_word_to_string(const struct CensusWord *w, bool numeric, char **out);

// Whether `w` is cyclically reduced.
//
// # Safety
// `w` must be a live handle and `out` writable.
enum CensusStatus census_word_is_cyclically_reduced(const struct CensusWord *w, bool *out);

// Exact `γ(n, F)` (or `γ(n, CR)` with `cyclically_reduced`) as a decimal
// string.
//
// # Safety
// `out` must be writable.
enum CensusStatus census_gamma(uint32_t k, size_t n, bool cyclically_reduced, char **out);

// Orbits of length-`n` cyclically reduced words over `k` generators, as a
// decimal string. `cap` bounds enumeration for the canonicalize method.
//
// # Safety
// `out` must be writable.
enum CensusStatus census_count_orbits(uint32_t k,
                                      size_t n,
                                      enum CensusOrbitMethod method,
                                      uint64_t cap,
                                      char **out);

// Least element of the orbit of a cyclically reduced `w`.
//
// # Safety
// `w` must be a live handle and `out` writable.
enum CensusStatus census_canonical_form(const struct CensusWord *w,
                                        uint32_t k,
                                        struct CensusWord **out);

// Membership of `w` in `E(num/den)` over `k` generators.
//
// # Safety
// `w` must be a live handle and `out` writable.
enum CensusStatus census_in_e(const struct CensusWord *w,
                              uint64_t num,
                              uint64_t den,
                              uint32_t k,
                              bool *out);

// The `C'(num/den)` test. `max_piece` may be null.
//
// # Safety
// `w` must be a live handle, `satisfied` writable and `max_piece` null or
// writable.
enum CensusStatus census_c_prime(const struct CensusWord *w,
                                 uint64_t num,
                                 uint64_t den,
                                 bool *satisfied,
                                 size_t *max_piece);

// Dehn's algorithm: writes the reduced word (empty iff `word` lies in the
// normal closure of `relator`) and the number of steps (may be null).
//
// # Safety
// Handles must be live, `out` writable and `steps` null or writable.
enum CensusStatus census_dehn_reduce(const struct CensusWord *relator,
                                     const struct CensusWord *word,
                                     struct CensusWord **out,
                                     size_t *steps);

// Bits emitted by the compression estimator for `w` over `k` generators.
//
// # Safety
// `w` must be a live handle and `out` writable.
enum CensusStatus census_c_est(const struct CensusWord *w, uint32_t k, size_t *out);

// Parses the `gens: <m>` / `rel: <word>` text format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` writable.
enum CensusStatus census_presentation_parse(const char *text,
                                            bool reduce,
                                            struct CensusPresentation **out);

// # Safety
// `p` must come from this library and not have been freed. Null is ignored.
void census_presentation_free(struct CensusPresentation *p);

// The presentation in the text file format.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum CensusStatus census_presentation_to_string(const struct CensusPresentation *p,
                                                bool numeric,
                                                char **out);

// `ℓ` and `ℓ₁`; either output may be null.
//
// # Safety
// `p` must be a live handle; outputs null or writable.
enum CensusStatus census_presentation_lengths(const struct CensusPresentation *p,
                                              size_t *ell,
                                              size_t *ell_1);

// Six-letter and binary encodings; `binary` may be null.
//
// # Safety
// `p` must be a live handle, `six_letter` writable, `binary` null or
// writable.
enum CensusStatus census_presentation_encode(const struct CensusPresentation *p,
                                             char **six_letter,
                                             char **binary);

// Inverse of the six-letter encoding.
//
// # Safety
// `six_letter` must be a NUL-terminated string and `out` writable.
enum CensusStatus census_presentation_decode(const char *six_letter,
                                             struct CensusPresentation **out);

// Removes relators of length at most two. `no_two_torsion` asserts the group
// has no elements of order two, which square relators require.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum CensusStatus census_tietze_cleanup(const struct CensusPresentation *p,
                                        bool no_two_torsion,
                                        struct CensusPresentation **out);

// Recovers the member of the orbit of `candidate` that starts with
// `prefix` over `k` generators.
//
// # Safety
// Handles must be live and `out` writable.
enum CensusStatus census_recover_from_candidate(const struct CensusWord *candidate,
                                                const struct CensusWord *prefix,
                                                uint32_t k,
                                                struct CensusWord **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CENSUS_H */
