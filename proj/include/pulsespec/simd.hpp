#pragma once

// Data-parallel inner loops of the spectrum pipeline.
//
// Every kernel has a portable scalar reference and, where the target allows
// it, an AVX2+FMA variant compiled in its own translation unit. The variant is
// picked at runtime from the CPU features; PULSESPEC_SIMD=scalar|avx2 in the
// environment, or set_active_isa(), overrides the choice.

#include <cstddef>
#include <span>

#include "pulsespec/core.hpp"

namespace pulsespec::simd {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa best_isa();
Isa active_isa();
/// Throws InvalidParameter if `isa` is not usable on this CPU/build.
void set_active_isa(Isa isa);

/// Coherence pair (eg, ge) of a 2x2 operator.
struct CoherencePair {
  cplx eg;
  cplx ge;
};

/// Linear map of one grid interval restricted to the coherences:
///   eg' = m[0][0] eg + m[0][1] ge,   ge' = m[1][0] eg + m[1][1] ge.
/// Free evolution and pi pulses never couple populations into coherences, so
/// this block is all the correlators need.
struct CoherenceMap {
  cplx m[2][2];
};

inline CoherencePair apply(const CoherenceMap& map, const CoherencePair& v) {
  return {map.m[0][0] * v.eg + map.m[0][1] * v.ge, map.m[1][0] * v.eg + map.m[1][1] * v.ge};
}

/// Inputs of the correlator accumulation over an N-step grid.
struct RowInputs {
  std::span<const CoherenceMap> maps;    ///< N entries; entry m advances t_m -> t_{m+1}
  std::span<const CoherencePair> seed1;  ///< N+1 entries, sigma_- rho(t_k)
  std::span<const CoherencePair> seed2;  ///< N+1 entries, rho(t_k) sigma_-
  double step = 0.0;
};

/// Adds rows k in [k_begin, k_end) of the correlator triangle into the theta
/// kernels: g[j] += w(k, j) * ge(seed_k propagated by j intervals), with
/// composite-trapezoid weights in t over [0, T - theta_j]. g1 and g2 must hold
/// at least N + 1 - k_begin entries and are indexed by j.
void accumulate_rows(Isa isa, const RowInputs& in, std::size_t k_begin, std::size_t k_end,
                     std::span<cplx> g1, std::span<cplx> g2);

/// out[i] = 2 Re sum_j a[j] exp(-i omega[i] j dtheta) for two coefficient arrays at once.
void fourier_real(Isa isa, std::span<const double> omega, double dtheta, std::span<const cplx> a1,
                  std::span<const cplx> a2, std::span<double> out1, std::span<double> out2);

/// Trapezoid weight of sample (k, j) on an N-step grid.
inline double row_weight(std::size_t k, std::size_t j, std::size_t n, double step) {
  if (j >= n) return 0.0;  // theta = T: the t-interval collapses to a point
  double w = step;
  if (k == 0) w *= 0.5;
  if (k + j == n) w *= 0.5;
  return w;
}

namespace detail {
// Resynchronisation period of the phasor recurrence in fourier_real.
inline constexpr std::size_t kPhasorResync = 64;

void accumulate_rows_scalar(const RowInputs&, std::size_t, std::size_t, std::span<cplx>, std::span<cplx>);
void fourier_real_scalar(std::span<const double>, double, std::span<const cplx>, std::span<const cplx>,
                         std::span<double>, std::span<double>);
#if PULSESPEC_HAVE_AVX2
void accumulate_rows_avx2(const RowInputs&, std::size_t, std::size_t, std::span<cplx>, std::span<cplx>);
void fourier_real_avx2(std::span<const double>, double, std::span<const cplx>, std::span<const cplx>,
                       std::span<double>, std::span<double>);
#endif
}  // namespace detail

}  // namespace pulsespec::simd
