#ifndef BOUNCER_H
#define BOUNCER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BouncerStatus {
  BOUNCER_STATUS_OK = 0,
  BOUNCER_STATUS_NULL_POINTER = 1,
  BOUNCER_STATUS_INVALID_PARAMS = 2,
  BOUNCER_STATUS_WRONG_SIDE = 3,
  BOUNCER_STATUS_DEGENERATE = 4,
  BOUNCER_STATUS_NO_COLLISION = 5,
  BOUNCER_STATUS_INVALID_GRID = 6,
  BOUNCER_STATUS_TAIL_NOT_CAPTURED = 7,
  BOUNCER_STATUS_NOT_CONVERGED = 8,
  BOUNCER_STATUS_GRID_MISMATCH = 9,
  BOUNCER_STATUS_NON_FINITE = 10,
  BOUNCER_STATUS_PANIC = 99,
} BouncerStatus;

// Mirror solution on x < 0.
typedef struct BouncerMirror BouncerMirror;

// Free Gaussian packet.
typedef struct BouncerPacket BouncerPacket;

// Wall solution at rest at the origin.
typedef struct BouncerPsi0 BouncerPsi0;

// ⟨x⟩, ⟨x²⟩, Δx, ⟨p⟩, ⟨p²⟩, Δp at `time`.
typedef struct BouncerMoments {
  double time;
  double x_mean;
  double x2_mean;
  double x_sd;
  double p_mean;
  double p2_mean;
  double p_sd;
} BouncerMoments;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last non-OK status on this thread, or NULL. The pointer
// stays valid until the next call into this library on the same thread.
const char *bouncer_last_error(void);

// # Safety
// `out` must be valid for writes.
enum BouncerStatus bouncer_packet_new(double x0,
                                      double p0,
                                      double alpha,
                                      double hbar,
                                      double mass,
                                      struct BouncerPacket **out);

// # Safety
// `h` must be NULL or come from [`bouncer_packet_new`], freed once.
void bouncer_packet_free(struct BouncerPacket *h);

// ψ_G(x, t).
//
// # Safety
// `h` must be a live handle; `re`, `im` valid for writes.
enum BouncerStatus bouncer_packet_psi(const struct BouncerPacket *h,
                                      double x,
                                      double t,
                                      double *re,
                                      double *im);

// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_packet_moments(const struct BouncerPacket *h,
                                          double t,
                                          struct BouncerMoments *out);

// Requires x0 ≤ 0 and (x0, p0) ≠ (0, 0).
//
// # Safety
// `out` must be valid for writes.
enum BouncerStatus bouncer_mirror_new(double x0,
                                      double p0,
                                      double alpha,
                                      double hbar,
                                      double mass,
                                      struct BouncerMirror **out);

// # Safety
// `h` must be NULL or come from [`bouncer_mirror_new`], freed once.
void bouncer_mirror_free(struct BouncerMirror *h);

// ψ̃(x, t); zero for x ≥ 0.
//
// # Safety
// `h` must be a live handle; `re`, `im` valid for writes.
enum BouncerStatus bouncer_mirror_psi(const struct BouncerMirror *h,
                                      double x,
                                      double t,
                                      double *re,
                                      double *im);

// |ψ̃(xs[i], t)|² into `out[i]` for i < n.
//
// # Safety
// `xs` readable and `out` writable for `n` doubles.
enum BouncerStatus bouncer_mirror_density(const struct BouncerMirror *h,
                                          double t,
                                          const double *xs,
                                          uintptr_t n,
                                          double *out);

// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_mirror_z0(const struct BouncerMirror *h, double *out);

// Normalization constant N.
//
// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_mirror_norm(const struct BouncerMirror *h, double *out);

// BOUNCER_STATUS_NO_COLLISION when the packet starts at or moves away from
// the wall.
//
// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_mirror_collision_time(const struct BouncerMirror *h, double *out);

// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_mirror_x2(const struct BouncerMirror *h, double t, double *out);

// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_mirror_p2(const struct BouncerMirror *h, double *out);

// Relative energy shift against the free packet.
//
// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_mirror_energy_shift(const struct BouncerMirror *h, double *out);

// Two-term ⟨x⟩ near the collision; `in_window` is 0 once |X(t)| > β_t.
//
// # Safety
// `h` must be a live handle; `value`, `in_window` valid for writes.
enum BouncerStatus bouncer_mirror_x_mean_near_collision(const struct BouncerMirror *h,
                                                        double t,
                                                        double *value,
                                                        bool *in_window);

// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_mirror_p_mean_at_collision(const struct BouncerMirror *h, double *out);

// Average force during the collision and its dimensional estimate.
//
// # Safety
// `h` must be a live handle; `force`, `estimate` valid for writes.
enum BouncerStatus bouncer_mirror_effective_force(const struct BouncerMirror *h,
                                                  double *force,
                                                  double *estimate);

// Ã(t) = ∫ψ̃*(x,0)ψ̃(x,t)dx.
//
// # Safety
// `h` must be a live handle; `re`, `im` valid for writes.
enum BouncerStatus bouncer_mirror_autocorrelation(const struct BouncerMirror *h,
                                                  double t,
                                                  double *re,
                                                  double *im);

// # Safety
// `out` must be valid for writes.
enum BouncerStatus bouncer_psi0_new(double alpha,
                                    double hbar,
                                    double mass,
                                    struct BouncerPsi0 **out);

// # Safety
// `h` must be NULL or come from [`bouncer_psi0_new`], freed once.
void bouncer_psi0_free(struct BouncerPsi0 *h);

// # Safety
// `h` must be a live handle; `re`, `im` valid for writes.
enum BouncerStatus bouncer_psi0_psi(const struct BouncerPsi0 *h,
                                    double x,
                                    double t,
                                    double *re,
                                    double *im);

// # Safety
// `h` must be a live handle; `out` valid for writes.
enum BouncerStatus bouncer_psi0_moments(const struct BouncerPsi0 *h,
                                        double t,
                                        struct BouncerMoments *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOUNCER_H */
