// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include <cmath>
#include <cstdint>

#include "pulsespec/simd.hpp"

namespace pulsespec::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

// Four rows of one correlator (eg, ge), split into real and imaginary lanes.
struct CohLanes {
  __m256d eg_re, eg_im, ge_re, ge_im;
};

struct MapBroadcast {
  __m256d c[8];
};

inline MapBroadcast broadcast(const CoherenceMap& map) {
  const double* m = reinterpret_cast<const double*>(map.m);
  MapBroadcast b;
  for (int i = 0; i < 8; ++i) b.c[i] = _mm256_broadcast_sd(m + i);
  return b;
}

inline CohLanes step(const MapBroadcast& m, const CohLanes& v) {
  CohLanes r;
  r.eg_re = _mm256_fmsub_pd(m.c[0], v.eg_re, _mm256_mul_pd(m.c[1], v.eg_im));
  r.eg_re = _mm256_fmadd_pd(m.c[2], v.ge_re, r.eg_re);
  r.eg_re = _mm256_fnmadd_pd(m.c[3], v.ge_im, r.eg_re);
  r.eg_im = _mm256_fmadd_pd(m.c[0], v.eg_im, _mm256_mul_pd(m.c[1], v.eg_re));
  r.eg_im = _mm256_fmadd_pd(m.c[2], v.ge_im, r.eg_im);
  r.eg_im = _mm256_fmadd_pd(m.c[3], v.ge_re, r.eg_im);
  r.ge_re = _mm256_fmsub_pd(m.c[4], v.eg_re, _mm256_mul_pd(m.c[5], v.eg_im));
  r.ge_re = _mm256_fmadd_pd(m.c[6], v.ge_re, r.ge_re);
  r.ge_re = _mm256_fnmadd_pd(m.c[7], v.ge_im, r.ge_re);
  r.ge_im = _mm256_fmadd_pd(m.c[4], v.eg_im, _mm256_mul_pd(m.c[5], v.eg_re));
  r.ge_im = _mm256_fmadd_pd(m.c[6], v.ge_im, r.ge_im);
  r.ge_im = _mm256_fmadd_pd(m.c[7], v.ge_re, r.ge_im);
  return r;
}

inline CohLanes load_seeds(std::span<const CoherencePair> seeds, std::size_t k0) {
  alignas(32) double v[4][kLanes];
  for (std::size_t i = 0; i < kLanes; ++i) {
    const auto& p = seeds[k0 + i];
    v[0][i] = p.eg.real();
    v[1][i] = p.eg.imag();
    v[2][i] = p.ge.real();
    v[3][i] = p.ge.imag();
  }
  return {_mm256_load_pd(v[0]), _mm256_load_pd(v[1]), _mm256_load_pd(v[2]), _mm256_load_pd(v[3])};
}

// Lanes whose row has not started yet hold zeros (possibly negative zeros),
// so the seed is blended in rather than or-ed.
inline CohLanes inject(const CohLanes& v, const CohLanes& seed, __m256d lane) {
  return {_mm256_blendv_pd(v.eg_re, seed.eg_re, lane), _mm256_blendv_pd(v.eg_im, seed.eg_im, lane),
          _mm256_blendv_pd(v.ge_re, seed.ge_re, lane), _mm256_blendv_pd(v.ge_im, seed.ge_im, lane)};
}

inline void scatter_add(std::span<cplx> g, std::size_t j0, __m256d w, __m256d re, __m256d im,
                        std::size_t lanes) {
  alignas(32) double wr[kLanes];
  alignas(32) double wi[kLanes];
  _mm256_store_pd(wr, _mm256_mul_pd(w, re));
  _mm256_store_pd(wi, _mm256_mul_pd(w, im));
  // Lane i sits at theta index j0 - i.
  for (std::size_t i = 0; i < lanes; ++i) {
    double* p = reinterpret_cast<double*>(&g[j0 - i]);
    p[0] += wr[i];
    p[1] += wi[i];
  }
}

}  // namespace

void accumulate_rows_avx2(const RowInputs& in, std::size_t k_begin, std::size_t k_end,
                          std::span<cplx> g1, std::span<cplx> g2) {
  const std::size_t n = in.maps.size();
  std::size_t k0 = k_begin;
  // Batches of four consecutive rows advance in lockstep over the global
  // interval index m; row k0 + i enters at m = k0 + i.
  for (; k0 + kLanes <= k_end && k0 + kLanes - 1 <= n; k0 += kLanes) {
    const CohLanes seed1 = load_seeds(in.seed1, k0);
    const CohLanes seed2 = load_seeds(in.seed2, k0);
    alignas(32) double wbase[kLanes];
    for (std::size_t i = 0; i < kLanes; ++i) wbase[i] = row_weight(k0 + i, 0, n, in.step);
    const __m256d w_run = _mm256_load_pd(wbase);

    CohLanes s1{};
    CohLanes s2{};
    s1.eg_re = s1.eg_im = s1.ge_re = s1.ge_im = _mm256_setzero_pd();
    s2 = s1;
    for (std::size_t m = k0;; ++m) {
      const std::size_t active = std::min<std::size_t>(m - k0 + 1, kLanes);
      if (m < k0 + kLanes) {
        // Inject the seed of row m into lane m - k0.
        alignas(32) std::uint64_t bits[kLanes] = {};
        bits[m - k0] = ~std::uint64_t{0};
        const __m256d lane = _mm256_load_pd(reinterpret_cast<const double*>(bits));
        s1 = inject(s1, seed1, lane);
        s2 = inject(s2, seed2, lane);
      }
      if (m == n) {
        // Last sample of every row: the upper t-endpoint of the trapezoid.
        alignas(32) double wl[kLanes];
        for (std::size_t i = 0; i < kLanes; ++i) wl[i] = row_weight(k0 + i, n - k0 - i, n, in.step);
        const __m256d w_last = _mm256_load_pd(wl);
        scatter_add(g1, m - k0, w_last, s1.ge_re, s1.ge_im, active);
        scatter_add(g2, m - k0, w_last, s2.ge_re, s2.ge_im, active);
        break;
      }
      scatter_add(g1, m - k0, w_run, s1.ge_re, s1.ge_im, active);
      scatter_add(g2, m - k0, w_run, s2.ge_re, s2.ge_im, active);
      const MapBroadcast map = broadcast(in.maps[m]);
      s1 = step(map, s1);
      s2 = step(map, s2);
    }
  }
  if (k0 < k_end) accumulate_rows_scalar(in, k0, k_end, g1, g2);
}

void fourier_real_avx2(std::span<const double> omega, double dtheta, std::span<const cplx> a1,
                       std::span<const cplx> a2, std::span<double> out1, std::span<double> out2) {
  const std::size_t n = a1.size();
  std::size_t i0 = 0;
  for (; i0 + kLanes <= omega.size(); i0 += kLanes) {
    alignas(32) double rr[kLanes];
    alignas(32) double ri[kLanes];
    for (std::size_t l = 0; l < kLanes; ++l) {
      rr[l] = std::cos(omega[i0 + l] * dtheta);
      ri[l] = -std::sin(omega[i0 + l] * dtheta);
    }
    const __m256d r_re = _mm256_load_pd(rr);
    const __m256d r_im = _mm256_load_pd(ri);
    __m256d z_re = _mm256_set1_pd(1.0);
    __m256d z_im = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n; ++j) {
      if (j % kPhasorResync == 0 && j != 0) {
        alignas(32) double zr[kLanes];
        alignas(32) double zi[kLanes];
        for (std::size_t l = 0; l < kLanes; ++l) {
          const double phase = omega[i0 + l] * (static_cast<double>(j) * dtheta);
          zr[l] = std::cos(phase);
          zi[l] = -std::sin(phase);
        }
        z_re = _mm256_load_pd(zr);
        z_im = _mm256_load_pd(zi);
      }
      const __m256d a1r = _mm256_set1_pd(a1[j].real());
      const __m256d a1i = _mm256_set1_pd(a1[j].imag());
      const __m256d a2r = _mm256_set1_pd(a2[j].real());
      const __m256d a2i = _mm256_set1_pd(a2[j].imag());
      s1 = _mm256_add_pd(s1, _mm256_fmsub_pd(a1r, z_re, _mm256_mul_pd(a1i, z_im)));
      s2 = _mm256_add_pd(s2, _mm256_fmsub_pd(a2r, z_re, _mm256_mul_pd(a2i, z_im)));
      const __m256d nr = _mm256_fmsub_pd(z_re, r_re, _mm256_mul_pd(z_im, r_im));
      z_im = _mm256_fmadd_pd(z_re, r_im, _mm256_mul_pd(z_im, r_re));
      z_re = nr;
    }
    const __m256d two = _mm256_set1_pd(2.0);
    alignas(32) double o1[kLanes];
    alignas(32) double o2[kLanes];
    _mm256_store_pd(o1, _mm256_mul_pd(two, s1));
    _mm256_store_pd(o2, _mm256_mul_pd(two, s2));
    for (std::size_t l = 0; l < kLanes; ++l) {
      out1[i0 + l] = o1[l];
      out2[i0 + l] = o2[l];
    }
  }
  if (i0 < omega.size()) {
    fourier_real_scalar(omega.subspan(i0), dtheta, a1, a2, out1.subspan(i0), out2.subspan(i0));
  }
}

}  // namespace pulsespec::simd::detail
