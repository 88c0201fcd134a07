#include "pulsespec/correlations.hpp"

#include <algorithm>

#include "pulsespec/parallel.hpp"

namespace pulsespec {

CorrelatorRow correlator_row(double t_seed, const TwoLevelOperator& rho_at_seed,
                             const PulseSchedule& schedule, const SimParams& params, Stepper stepper) {
  const auto grid = TimeGrid::make(schedule.window_end(), params.dt);
  std::size_t k = 0;
  try {
    k = grid_index_of(grid, t_seed);
  } catch (const InvalidParameter&) {
    throw SeedOffGrid("correlator_row: seed time is not a grid point");
  }
  const auto p1 = evolve_path(left_mul_sigma_minus(rho_at_seed), k, schedule, params, stepper);
  const auto p2 = evolve_path(right_mul_sigma_minus(rho_at_seed), k, schedule, params, stepper);
  CorrelatorRow row;
  row.c1.reserve(p1.size());
  row.c2.reserve(p2.size());
  // Tr[X sigma_+] = X_ge and Tr[sigma_+ X] = X_ge.
  for (const auto& op : p1) row.c1.push_back(op.ge);
  for (const auto& op : p2) row.c2.push_back(op.ge);
  return row;
}

std::vector<simd::CoherenceMap> coherence_maps(const PulseSchedule& schedule, const SimParams& params,
                                               Stepper stepper) {
  const auto grid = TimeGrid::make(schedule.window_end(), params.dt);
  const TwoLevelOperator unit_eg{0.0, 1.0, 0.0, 0.0};
  const TwoLevelOperator unit_ge{0.0, 0.0, 1.0, 0.0};
  std::vector<simd::CoherenceMap> maps(grid.steps);
  for (std::size_t m = 0; m < grid.steps; ++m) {
    const auto a = evolve_operator(unit_eg, grid.at(m), grid.at(m + 1), schedule, params, stepper);
    const auto b = evolve_operator(unit_ge, grid.at(m), grid.at(m + 1), schedule, params, stepper);
    maps[m].m[0][0] = a.eg;
    maps[m].m[1][0] = a.ge;
    maps[m].m[0][1] = b.eg;
    maps[m].m[1][1] = b.ge;
  }
  return maps;
}

CorrelationKernel accumulate_kernel(const PulseSchedule& schedule, const SimParams& params,
                                    const KernelOptions& options) {
  const auto traj = density_trajectory(schedule, params, options.stepper);
  const auto maps = coherence_maps(schedule, params, options.stepper);
  const std::size_t n = traj.grid.steps;

  std::vector<simd::CoherencePair> seed1(n + 1);
  std::vector<simd::CoherencePair> seed2(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto a = left_mul_sigma_minus(traj.states[k]);
    const auto b = right_mul_sigma_minus(traj.states[k]);
    seed1[k] = {a.eg, a.ge};
    seed2[k] = {b.eg, b.ge};
  }
  const simd::RowInputs in{maps, seed1, seed2, traj.grid.step};

  const std::size_t block = std::max<std::size_t>(1, options.rows_per_task);
  const std::size_t n_blocks = (n + 1 + block - 1) / block;
  struct Partial {
    std::vector<cplx> g1, g2;
  };
  std::vector<Partial> partials(n_blocks);
  const auto isa = simd::active_isa();
  parallel_for(n_blocks, options.threads, [&](std::size_t b) {
    const std::size_t k_begin = b * block;
    const std::size_t k_end = std::min(n + 1, k_begin + block);
    auto& p = partials[b];
    p.g1.assign(n + 1 - k_begin, cplx{});
    p.g2.assign(n + 1 - k_begin, cplx{});
    simd::accumulate_rows(isa, in, k_begin, k_end, p.g1, p.g2);
  });

  CorrelationKernel kernel;
  kernel.theta = traj.grid;
  kernel.g1.assign(n + 1, cplx{});
  kernel.g2.assign(n + 1, cplx{});
  for (auto& p : partials) {
    for (std::size_t j = 0; j < p.g1.size(); ++j) {
      kernel.g1[j] += p.g1[j];
      kernel.g2[j] += p.g2[j];
    }
    p = {};
  }
  return kernel;
}

}  // namespace pulsespec
