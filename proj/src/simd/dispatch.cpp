#include <atomic>
#include <cstdlib>
#include <string_view>

#include "pulsespec/simd.hpp"

namespace pulsespec::simd {
namespace {

bool cpu_has_avx2() {
#if PULSESPEC_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("PULSESPEC_SIMD");
  if (env != nullptr) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return best_isa();
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

Isa best_isa() { return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw InvalidParameter(std::string("SIMD variant unavailable: ") + isa_name(isa));
  active_slot().store(isa, std::memory_order_relaxed);
}

void accumulate_rows(Isa isa, const RowInputs& in, std::size_t k_begin, std::size_t k_end,
                     std::span<cplx> g1, std::span<cplx> g2) {
#if PULSESPEC_HAVE_AVX2
  if (isa == Isa::Avx2) return detail::accumulate_rows_avx2(in, k_begin, k_end, g1, g2);
#endif
  (void)isa;
  detail::accumulate_rows_scalar(in, k_begin, k_end, g1, g2);
}

void fourier_real(Isa isa, std::span<const double> omega, double dtheta, std::span<const cplx> a1,
                  std::span<const cplx> a2, std::span<double> out1, std::span<double> out2) {
#if PULSESPEC_HAVE_AVX2
  if (isa == Isa::Avx2) return detail::fourier_real_avx2(omega, dtheta, a1, a2, out1, out2);
#endif
  (void)isa;
  detail::fourier_real_scalar(omega, dtheta, a1, a2, out1, out2);
}

}  // namespace pulsespec::simd
