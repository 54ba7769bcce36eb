#ifndef EQTRANSFER_H
#define EQTRANSFER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Strategy entry for a vertex the player does not own.
#define ET_NO_CHOICE SIZE_MAX

// Search mode: query every labeling.
#define ET_MODE_NAIVE 0

// Search mode: drop outcomes worst-first, `|O| + 1` queries.
#define ET_MODE_GREEDY 1

typedef enum EtStatus {
  ET_STATUS_OK = 0,
  ET_STATUS_NULL_POINTER = 1,
  ET_STATUS_INVALID_UTF8 = 2,
  ET_STATUS_PARSE = 3,
  ET_STATUS_INVALID_ARGUMENT = 4,
  // The game form is not determined, so the oracle cannot answer.
  ET_STATUS_NOT_DETERMINED = 5,
  // Any other oracle failure or infeasible request.
  ET_STATUS_SOLVER = 6,
  ET_STATUS_PANIC = 7,
} EtStatus;

// A parsed matrix game file.
typedef struct EtGame EtGame;

// A parsed strict partial order with its labels.
typedef struct EtOrder EtOrder;

// A parsed priority game.
typedef struct EtPriorityGame EtPriorityGame;

// An equilibrium of a matrix game.
typedef struct EtProfile {
  size_t row;
  size_t col;
  // Index of the outcome in the game's outcome list.
  size_t outcome;
  size_t decisions;
  size_t extractions;
} EtProfile;

// Summary of a positional secure equilibrium of a priority game.
typedef struct EtPriorityResult {
  uint32_t realized_priority;
  size_t decisions;
  size_t extractions;
  // Whether the independent verifier accepted the pair.
  bool verified;
} EtPriorityResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next call into this library from the same thread.
const char *et_last_error(void);

// Library version as a static NUL-terminated string.
const char *et_version(void);

// Parses a game file. On success `*out` owns a new handle.
//
// # Safety
// `text` must be NULL or a NUL-terminated string; `out` must be NULL or
// writable.
enum EtStatus et_game_parse(const char *text, struct EtGame **out);

// # Safety
// `game` must be NULL or a handle from [`et_game_parse`] not yet freed.
void et_game_free(struct EtGame *game);

// Strategy counts and number of outcomes.
//
// # Safety
// `game` must be a live handle; the out-pointers must be writable.
enum EtStatus et_game_shape(const struct EtGame *game,
                            size_t *rows,
                            size_t *cols,
                            size_t *outcomes);

// Whether every win/lose labeling of the game form has a winner.
//
// # Safety
// `game` must be a live handle; `determined` must be writable.
enum EtStatus et_game_is_determined(const struct EtGame *game, bool *determined);

// A Nash equilibrium under the file's preferences (payoffs by default).
//
// # Safety
// `game` must be a live handle; `result` must be writable.
enum EtStatus et_game_solve(const struct EtGame *game, uint32_t search, struct EtProfile *result);

// A secure equilibrium; the game needs payoffs.
//
// # Safety
// `game` must be a live handle; `result` must be writable.
enum EtStatus et_game_secure(const struct EtGame *game, uint32_t search, struct EtProfile *result);

// Parses a relation file and checks it is a strict partial order.
//
// # Safety
// `text` must be NULL or a NUL-terminated string; `out` must be NULL or
// writable.
enum EtStatus et_order_parse(const char *text, struct EtOrder **out);

// # Safety
// `order` must be NULL or a handle from [`et_order_parse`] not yet freed.
void et_order_free(struct EtOrder *order);

// Whether `a` is below `b` in the lifted order. Sets are written as
// label lists such as `{1,3}` or `{}`.
//
// # Safety
// `order` must be a live handle, `a` and `b` NUL-terminated strings and
// `less` writable.
enum EtStatus et_order_lift_less(const struct EtOrder *order,
                                 const char *a,
                                 const char *b,
                                 bool *less);

// Parses an arena file with payoffs.
//
// # Safety
// `text` must be NULL or a NUL-terminated string; `out` must be NULL or
// writable.
enum EtStatus et_priority_parse(const char *text, struct EtPriorityGame **out);

// # Safety
// `game` must be NULL or a handle from [`et_priority_parse`] not yet freed.
void et_priority_free(struct EtPriorityGame *game);

// Number of vertices in the arena.
//
// # Safety
// `game` must be a live handle; `count` must be writable.
enum EtStatus et_priority_vertex_count(const struct EtPriorityGame *game, size_t *count);

// A positional secure equilibrium from the initial vertex. `s1` and `s2`
// receive one successor per vertex, or [`ET_NO_CHOICE`] where the other
// player moves; both must hold `len` entries, at least the vertex count.
//
// # Safety
// `game` must be a live handle, `s1` and `s2` writable arrays of `len`
// elements and `result` writable.
enum EtStatus et_priority_secure(const struct EtPriorityGame *game,
                                 uint32_t search,
                                 size_t *s1,
                                 size_t *s2,
                                 size_t len,
                                 struct EtPriorityResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQTRANSFER_H */
