#ifndef STARWORLDS_H
#define STARWORLDS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SwStatus {
  SW_STATUS_OK = 0,
  SW_STATUS_NULL_POINTER = 1,
  SW_STATUS_INVALID_ARGUMENT = 2,
  SW_STATUS_PARSE = 3,
  SW_STATUS_IO = 4,
  /**
   * Robot or goal inside an obstacle, or another geometric precondition.
   */
  SW_STATUS_GEOMETRY = 5,
  SW_STATUS_ITERATION_LIMIT = 6,
  /**
   * The formed world failed validation.
   */
  SW_STATUS_VALIDATION = 7,
  SW_STATUS_OUT_OF_RANGE = 8,
  /**
   * The output buffer was too small; the required size was reported.
   */
  SW_STATUS_BUFFER_TOO_SMALL = 9,
  /**
   * A panic was caught at the boundary.
   */
  SW_STATUS_INTERNAL = 10,
} SwStatus;

typedef enum SwTermination {
  SW_TERMINATION_GOAL_REACHED = 0,
  SW_TERMINATION_MAX_STEPS = 1,
  SW_TERMINATION_STALLED = 2,
} SwTermination;

typedef struct SwScenario SwScenario;

typedef struct SwStarWorld SwStarWorld;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sw_last_error(void);

/**
 * Loads a scenario file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SwStatus sw_scenario_load(const char *path, struct SwScenario **out);

/**
 * Parses a scenario from text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SwStatus sw_scenario_parse(const char *text, struct SwScenario **out);

/**
 * Generates a random scene with `n` obstacles.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SwStatus sw_scenario_generate(size_t n, uint64_t seed, struct SwScenario **out);

/**
 * Number of obstacles in the scenario before inflation; 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live scenario handle.
 */
size_t sw_scenario_obstacle_count(const struct SwScenario *s);

/**
 * # Safety
 * `s` must be NULL or a handle not yet freed.
 */
void sw_scenario_free(struct SwScenario *s);

/**
 * Inflates, forms and validates the star world of a scenario.
 *
 * # Safety
 * `s` must be a live scenario handle and `out` a valid pointer.
 */
enum SwStatus sw_starify(const struct SwScenario *s,
                         bool exclude_obstacle_points,
                         struct SwStarWorld **out);

/**
 * Number of star obstacles; 0 for NULL.
 *
 * # Safety
 * `w` must be NULL or a live world handle.
 */
size_t sw_world_len(const struct SwStarWorld *w);

/**
 * Whether the world is disjoint (false for the fallback world and NULL).
 *
 * # Safety
 * `w` must be NULL or a live world handle.
 */
bool sw_world_is_disjoint(const struct SwStarWorld *w);

/**
 * Clustering passes used to form the world; 0 for NULL.
 *
 * # Safety
 * `w` must be NULL or a live world handle.
 */
size_t sw_world_iterations(const struct SwStarWorld *w);

/**
 * Centroid of the kernel points of star `i`.
 *
 * # Safety
 * `w` must be a live world handle; `x` and `y` valid pointers.
 */
enum SwStatus sw_world_kernel_centroid(const struct SwStarWorld *w, size_t i, double *x, double *y);

/**
 * `Γ` of point `(px, py)` against star `i`, centred at its kernel centroid.
 *
 * # Safety
 * `w` must be a live world handle and `out` a valid pointer.
 */
enum SwStatus sw_world_gamma(const struct SwStarWorld *w,
                             size_t i,
                             double px,
                             double py,
                             double *out);

/**
 * Whether star `i` contains `(px, py)`.
 *
 * # Safety
 * `w` must be a live world handle and `out` a valid pointer.
 */
enum SwStatus sw_world_contains(const struct SwStarWorld *w,
                                size_t i,
                                double px,
                                double py,
                                bool *out);

/**
 * # Safety
 * `w` must be NULL or a handle not yet freed.
 */
void sw_world_free(struct SwStarWorld *w);

/**
 * Runs the planner on the scenario and copies the trajectory as
 * interleaved `x, y` pairs into `xy`, which holds `capacity` points.
 *
 * `n_points` receives the trajectory length. When it exceeds `capacity`
 * the first `capacity` points are written and `BufferTooSmall` returned.
 *
 * # Safety
 * `s` must be a live scenario handle, `xy` valid for `2 * capacity`
 * doubles (or NULL with `capacity == 0`), `n_points` and `termination`
 * valid pointers.
 */
enum SwStatus sw_simulate(const struct SwScenario *s,
                          size_t max_steps,
                          double *xy,
                          size_t capacity,
                          size_t *n_points,
                          enum SwTermination *termination);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sw_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STARWORLDS_H */
