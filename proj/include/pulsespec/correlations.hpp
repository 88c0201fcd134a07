#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pulsespec/core.hpp"
#include "pulsespec/dynamics.hpp"
#include "pulsespec/simd.hpp"

namespace pulsespec {

class SeedOffGrid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CorrelatorRow {
  std::vector<cplx> c1;  ///< <sigma_+(t + theta) sigma_-(t)>
  std::vector<cplx> c2;  ///< <sigma_-(t) sigma_+(t + theta)>
};

/// Both two-time correlators for one seed time t on the grid, over
/// theta in [0, T - t], by propagating sigma_- rho(t) and rho(t) sigma_-.
CorrelatorRow correlator_row(double t_seed, const TwoLevelOperator& rho_at_seed,
                             const PulseSchedule& schedule, const SimParams& params,
                             Stepper stepper = Stepper::Rk4);

/// Per-interval coherence maps of the pulse-interrupted free evolution,
/// obtained by pushing the basis coherences through evolve_operator.
std::vector<simd::CoherenceMap> coherence_maps(const PulseSchedule& schedule, const SimParams& params,
                                               Stepper stepper = Stepper::Rk4);

struct KernelOptions {
  Stepper stepper = Stepper::Rk4;
  unsigned threads = 0;  ///< 0 = hardware concurrency
  std::size_t rows_per_task = 256;
};

/// Integrates both correlators over t for every theta on the grid.
///
/// Rows are split into fixed blocks of `rows_per_task`; block partials are
/// merged in block order, so the result is bit-identical for any thread
/// count.
CorrelationKernel accumulate_kernel(const PulseSchedule& schedule, const SimParams& params,
                                    const KernelOptions& options = {});

}  // namespace pulsespec
