#include "pulsespec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulsespec/parallel.hpp"
#include "pulsespec/simd.hpp"

namespace pulsespec {
namespace {

constexpr std::size_t kOmegaBlock = 64;

std::vector<std::size_t> strict_extrema(const std::vector<double>& values, bool maxima) {
  const auto s = smooth3(values);
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double l = s[i - 1], c = s[i], r = s[i + 1];
    if (maxima ? (c > l && c > r) : (c < l && c < r)) out.push_back(i);
  }
  return out;
}

}  // namespace

SpectrumResult spectrum_from_kernel(const CorrelationKernel& kernel, const std::vector<double>& omega_grid,
                                    unsigned threads) {
  if (omega_grid.empty() || kernel.g1.empty() || kernel.g1.size() != kernel.g2.size()) {
    throw InvalidParameter("spectrum_from_kernel: empty or mismatched grids");
  }
  const std::size_t n = kernel.g1.size();
  const double h = kernel.theta.step;
  std::vector<cplx> a1(n);
  std::vector<cplx> a2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j + 1 == n) ? 0.5 * h : h;
    a1[j] = w * kernel.g1[j];
    a2[j] = w * kernel.g2[j];
  }

  SpectrumResult res;
  res.omega = omega_grid;
  res.emission.resize(omega_grid.size());
  res.direct_absorption.resize(omega_grid.size());
  const auto isa = simd::active_isa();
  const std::size_t blocks = (omega_grid.size() + kOmegaBlock - 1) / kOmegaBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t i0 = b * kOmegaBlock;
    const std::size_t len = std::min(kOmegaBlock, omega_grid.size() - i0);
    simd::fourier_real(isa, std::span(omega_grid).subspan(i0, len), h, a1, a2,
                       std::span(res.emission).subspan(i0, len),
                       std::span(res.direct_absorption).subspan(i0, len));
  });
  res.net_absorption.resize(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    res.net_absorption[i] = res.direct_absorption[i] - res.emission[i];
  }
  return res;
}

SpectrumResult compute_spectrum(const PulseSchedule& schedule, const SimParams& params,
                                const KernelOptions& options) {
  params.validate_against(schedule);
  const auto kernel = accumulate_kernel(schedule, params, options);
  auto res = spectrum_from_kernel(kernel, params.omega_grid, options.threads);
  res.params = params;
  res.schedule_digest = schedule.digest();
  return res;
}

SumRule emission_sum_rule(const SpectrumResult& result, const CorrelationKernel& kernel) {
  const auto& w = result.omega;
  if (w.size() < 2 || w.front() > -40.0 || w.back() < 40.0) {
    throw InvalidParameter("emission_sum_rule: omega grid must span [-40, 40]");
  }
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] - w[i - 1] > 0.05 + 1e-12) throw InvalidParameter("emission_sum_rule: omega step exceeds 0.05");
  }
  const auto& p = result.emission;
  double integral = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) integral += 0.5 * (p[i] + p[i - 1]) * (w[i] - w[i - 1]);

  SumRule rule;
  rule.lhs = integral / (2.0 * std::numbers::pi);
  rule.rhs = kernel.g1.empty() ? 0.0 : kernel.g1.front().real();
  const double peak = *std::max_element(p.begin(), p.end());
  const double edge = std::max(std::abs(p.front()), std::abs(p.back()));
  rule.edge_warning = edge > 1e-3 * peak;
  return rule;
}

SpectrumResult detuning_average(const PulseSchedule& schedule, const SimParams& base_params,
                                const std::vector<double>& deltas, const std::vector<double>& weights,
                                const KernelOptions& options) {
  if (deltas.empty() || deltas.size() != weights.size()) {
    throw WeightNormalizationError("detuning_average: deltas and weights must be nonempty and equally long");
  }
  double total = 0.0;
  for (double wt : weights) {
    if (!(wt >= 0.0)) throw WeightNormalizationError("detuning_average: negative weight");
    total += wt;
  }
  if (std::abs(total - 1.0) > 1e-12) throw WeightNormalizationError("detuning_average: weights must sum to 1");

  SpectrumResult avg;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    SimParams p = base_params;
    p.delta = deltas[i];
    const auto run = compute_spectrum(schedule, p, options);
    if (i == 0) {
      avg = run;
      avg.params = base_params;
      for (auto& v : avg.emission) v *= weights[0];
      for (auto& v : avg.direct_absorption) v *= weights[0];
      continue;
    }
    for (std::size_t k = 0; k < avg.omega.size(); ++k) {
      avg.emission[k] += weights[i] * run.emission[k];
      avg.direct_absorption[k] += weights[i] * run.direct_absorption[k];
    }
  }
  for (std::size_t k = 0; k < avg.omega.size(); ++k) {
    avg.net_absorption[k] = avg.direct_absorption[k] - avg.emission[k];
  }
  return avg;
}

std::vector<double> smooth3(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> out(n);
  if (n < 2) return values;
  out[0] = 0.5 * (values[0] + values[1]);
  out[n - 1] = 0.5 * (values[n - 2] + values[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (values[i - 1] + values[i] + values[i + 1]) / 3.0;
  return out;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& values) { return strict_extrema(values, true); }

std::vector<std::size_t> local_minima(const std::vector<double>& values) { return strict_extrema(values, false); }

std::size_t argmax(const std::vector<double>& values) {
  if (values.empty()) throw InvalidParameter("argmax of an empty array");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace pulsespec
