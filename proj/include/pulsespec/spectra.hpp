#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pulsespec/core.hpp"
#include "pulsespec/correlations.hpp"

namespace pulsespec {

class WeightNormalizationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Emission P, direct absorption P' and net absorption Q = P' - P on
/// `omega_grid`, with the theta integral done by the trapezoid rule.
/// Only the spectral arrays are filled; params and digest are left default.
SpectrumResult spectrum_from_kernel(const CorrelationKernel& kernel, const std::vector<double>& omega_grid,
                                    unsigned threads = 0);

/// Full pipeline for one schedule: trajectory, kernel, spectra.
SpectrumResult compute_spectrum(const PulseSchedule& schedule, const SimParams& params,
                                const KernelOptions& options = {});

struct SumRule {
  double lhs = 0.0;          ///< integral of P over the grid divided by 2 pi
  double rhs = 0.0;          ///< Re G1(0), the time-integrated excited population
  bool edge_warning = false; ///< |P| at a grid edge above 1e-3 of max P
};

/// Parseval-type check of the emission spectrum. Requires a grid covering
/// [-40, 40] with spacing at most 0.05.
SumRule emission_sum_rule(const SpectrumResult& result, const CorrelationKernel& kernel);

/// Weighted ensemble average of full pipeline runs over detunings. Weights
/// must be nonnegative and sum to one within 1e-12.
SpectrumResult detuning_average(const PulseSchedule& schedule, const SimParams& base_params,
                                const std::vector<double>& deltas, const std::vector<double>& weights,
                                const KernelOptions& options = {});

/// Three-point moving average; the end points average over their two samples.
std::vector<double> smooth3(const std::vector<double>& values);

/// Indices of strict local maxima of the smoothed values.
std::vector<std::size_t> local_maxima(const std::vector<double>& values);

/// Indices of strict local minima of the smoothed values.
std::vector<std::size_t> local_minima(const std::vector<double>& values);

/// Index of the largest value; ties resolve to the lowest index.
std::size_t argmax(const std::vector<double>& values);

}  // namespace pulsespec
