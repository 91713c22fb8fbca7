#ifndef HEXATOPE_H
#define HEXATOPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
/* Every function returns an HxStatus; results go through out-pointers.
 * On failure, hx_last_error() describes the error for the calling thread. */

typedef enum HxPlayer {
  HX_PLAYER_WHITE = 0,
  HX_PLAYER_BLACK = 1,
} HxPlayer;

typedef enum HxStatus {
  HX_STATUS_OK = 0,
  HX_STATUS_NULL_POINTER = 1,
  HX_STATUS_INVALID_ARGUMENT = 2,
  HX_STATUS_PARSE_ERROR = 3,
  HX_STATUS_ILLEGAL_MOVE = 4,
  HX_STATUS_CAP_EXCEEDED = 5,
  HX_STATUS_BUDGET_EXCEEDED = 6,
  HX_STATUS_BUFFER_TOO_SMALL = 7,
  HX_STATUS_INTERNAL = 8,
} HxStatus;

// A family of d-intervals.
typedef struct HxDIntervalFamily HxDIntervalFamily;

// A HEX position: coloring plus the player to move.
typedef struct HxPosition HxPosition;

// A set family over `[m]`, `m ≤ 24`.
typedef struct HxSetFamily HxSetFamily;

// Self-map of `[0,1]^dim`: reads `dim` values from `x`, writes `dim`
// values to `out`.
typedef void (*HxCubeMapFn)(const double *x, double *out, size_t dim, void *user);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *hx_last_error(void);

// Library version as a static NUL-terminated string.
const char *hx_version(void);

// Empty `rows × cols` board with White to move.
//
// # Safety
// `out` must be a valid pointer.
enum HxStatus hx_position_new(size_t rows, size_t cols, struct HxPosition **out);

// Parses the text form (`hex r c` then rows of `W`, `B`, `.`); the mover
// is inferred from the tile counts.
//
// # Safety
// `text` must be NUL-terminated; `out` must be valid.
enum HxStatus hx_position_parse(const char *s, struct HxPosition **out);

// Plays a tile for the player to move.
//
// # Safety
// `p` must come from this library and not be freed.
enum HxStatus hx_position_play(struct HxPosition *p, size_t row, size_t col);

// # Safety
// `p` must be a live handle and `out` valid.
enum HxStatus hx_position_to_move(const struct HxPosition *p, enum HxPlayer *out);

// Exact value of the position (at most 16 tiles). `best_row`/`best_col`
// receive a move for the mover, or `SIZE_MAX` on a full board.
//
// # Safety
// `p` must be a live handle; out-pointers must be valid.
enum HxStatus hx_position_solve(const struct HxPosition *p,
                                enum HxPlayer *winner,
                                size_t *best_row,
                                size_t *best_col);

// Text form of the position.
//
// # Safety
// `p` must be a live handle; `buf` must hold `len` bytes.
enum HxStatus hx_position_to_text(const struct HxPosition *p,
                                  char *buf,
                                  size_t len,
                                  size_t *needed);

// # Safety
// `p` must come from this library or be NULL; it must not be used after.
void hx_position_free(struct HxPosition *p);

// Winner of a full coloring given row by row: 1 = White, 2 = Black.
//
// # Safety
// `cells` must hold `rows·cols` bytes.
enum HxStatus hx_winner_2d(size_t rows, size_t cols, const uint8_t *cells, enum HxPlayer *winner);

// Parses the set-family text format.
//
// # Safety
// `text` must be NUL-terminated; `out` valid.
enum HxStatus hx_setfam_parse(const char *s, struct HxSetFamily **out);

// Exact argument complexity and ground-set size.
//
// # Safety
// `f` must be a live handle; out-pointers valid.
enum HxStatus hx_setfam_complexity(const struct HxSetFamily *f, size_t *c, size_t *m);

// # Safety
// `f` must come from this library or be NULL.
void hx_setfam_free(struct HxSetFamily *f);

// Parses the d-interval text format (`dint d partite|homogeneous`).
//
// # Safety
// `text` must be NUL-terminated; `out` valid.
enum HxStatus hx_dint_parse(const char *s, struct HxDIntervalFamily **out);

// Packing and transversal numbers; the common fractional value
// `ν* = τ*` is written as `p/q` into `buf`.
//
// # Safety
// `f` must be a live handle; `buf` must hold `len` bytes.
enum HxStatus hx_dint_numbers(const struct HxDIntervalFamily *f,
                              size_t *nu_out,
                              size_t *tau_out,
                              char *buf,
                              size_t len,
                              size_t *needed);

// # Safety
// `f` must come from this library or be NULL.
void hx_dint_free(struct HxDIntervalFamily *f);

// Point with `|f(x) − x|_∞ < eps` for a caller-supplied map. `point`
// must hold `dim` doubles.
//
// # Safety
// `f` must be callable with the given `user` pointer; `point` and
// `residual` must be valid.
enum HxStatus hx_brouwer_fixed_point(size_t dim,
                                     HxCubeMapFn f,
                                     void *user,
                                     double eps,
                                     double *point,
                                     double *residual);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HEXATOPE_H */
