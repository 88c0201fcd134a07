#include <cmath>

#include "pulsespec/simd.hpp"

namespace pulsespec::simd::detail {
namespace {

// Plain real arithmetic: std::complex products go through the C99 NaN
// recovery path and are several times slower in this loop.
struct Coh {
  double eg_re, eg_im, ge_re, ge_im;
};

inline Coh load(const CoherencePair& p) { return {p.eg.real(), p.eg.imag(), p.ge.real(), p.ge.imag()}; }

inline Coh step(const CoherenceMap& map, const Coh& v) {
  const double* m = reinterpret_cast<const double*>(map.m);
  // m: [00re 00im 01re 01im 10re 10im 11re 11im]
  return {m[0] * v.eg_re - m[1] * v.eg_im + m[2] * v.ge_re - m[3] * v.ge_im,
          m[0] * v.eg_im + m[1] * v.eg_re + m[2] * v.ge_im + m[3] * v.ge_re,
          m[4] * v.eg_re - m[5] * v.eg_im + m[6] * v.ge_re - m[7] * v.ge_im,
          m[4] * v.eg_im + m[5] * v.eg_re + m[6] * v.ge_im + m[7] * v.ge_re};
}

inline void add_scaled(cplx& g, double w, double re, double im) {
  double* p = reinterpret_cast<double*>(&g);
  p[0] += w * re;
  p[1] += w * im;
}

}  // namespace

void accumulate_rows_scalar(const RowInputs& in, std::size_t k_begin, std::size_t k_end,
                            std::span<cplx> g1, std::span<cplx> g2) {
  const std::size_t n = in.maps.size();
  for (std::size_t k = k_begin; k < k_end; ++k) {
    Coh s1 = load(in.seed1[k]);
    Coh s2 = load(in.seed2[k]);
    const std::size_t len = n - k;
    for (std::size_t j = 0; j <= len; ++j) {
      const double w = row_weight(k, j, n, in.step);
      add_scaled(g1[j], w, s1.ge_re, s1.ge_im);
      add_scaled(g2[j], w, s2.ge_re, s2.ge_im);
      if (j < len) {
        const auto& map = in.maps[k + j];
        s1 = step(map, s1);
        s2 = step(map, s2);
      }
    }
  }
}

void fourier_real_scalar(std::span<const double> omega, double dtheta, std::span<const cplx> a1,
                         std::span<const cplx> a2, std::span<double> out1, std::span<double> out2) {
  const std::size_t n = a1.size();
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double w = omega[i];
    const double r_re = std::cos(w * dtheta);
    const double r_im = -std::sin(w * dtheta);
    double z_re = 1.0;
    double z_im = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j % kPhasorResync == 0 && j != 0) {
        const double phase = w * (static_cast<double>(j) * dtheta);
        z_re = std::cos(phase);
        z_im = -std::sin(phase);
      }
      s1 += a1[j].real() * z_re - a1[j].imag() * z_im;
      s2 += a2[j].real() * z_re - a2[j].imag() * z_im;
      const double nr = z_re * r_re - z_im * r_im;
      z_im = z_re * r_im + z_im * r_re;
      z_re = nr;
    }
    out1[i] = 2.0 * s1;
    out2[i] = 2.0 * s2;
  }
}

}  // namespace pulsespec::simd::detail
