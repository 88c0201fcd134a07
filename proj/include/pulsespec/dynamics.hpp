#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pulsespec/core.hpp"

namespace pulsespec {

class InvalidInterval : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Right-hand side of the undriven Bloch equations:
///   d ee = -gamma ee,  d gg = gamma ee,
///   d ge = (i delta - gamma/2) ge,  d eg = (-i delta - gamma/2) eg.
TwoLevelOperator free_derivative(const TwoLevelOperator& op, double delta, double gamma);

/// Closed-form free evolution over `dt`.
TwoLevelOperator free_propagator_exact(const TwoLevelOperator& op, double dt, double delta, double gamma);

/// One classical fourth-order Runge-Kutta step of free_derivative.
TwoLevelOperator rk4_step(const TwoLevelOperator& op, double dt, double delta, double gamma);

/// Instantaneous pi pulse, op -> sigma_i op sigma_i.
TwoLevelOperator apply_pulse(const TwoLevelOperator& op, PulseAxis axis);

enum class Stepper { Rk4, Exact };

/// Free evolution from t_from to t_to with the pulses of `schedule` applied
/// at their exact times. A pulse at t_from counts as already applied, a pulse
/// at t_to is applied. Steps follow the global grid of `params` and are split
/// at pulse times.
TwoLevelOperator evolve_operator(const TwoLevelOperator& op, double t_from, double t_to,
                                 const PulseSchedule& schedule, const SimParams& params,
                                 Stepper stepper = Stepper::Rk4);

/// Samples of `op` evolved from grid point k_from to T, one per grid point
/// (element 0 is `op` itself).
std::vector<TwoLevelOperator> evolve_path(const TwoLevelOperator& op, std::size_t k_from,
                                          const PulseSchedule& schedule, const SimParams& params,
                                          Stepper stepper = Stepper::Rk4);

struct Trajectory {
  TimeGrid grid;
  std::vector<TwoLevelOperator> states;  ///< post-pulse state at pulse-coincident points
};

/// rho(t) on the uniform grid starting from the fully excited state.
Trajectory density_trajectory(const PulseSchedule& schedule, const SimParams& params,
                              Stepper stepper = Stepper::Rk4);

/// Index of the grid point at `t`, or throws if `t` is not on the grid.
std::size_t grid_index_of(const TimeGrid& grid, double t);

/// Tolerance used to treat a time as coincident with a grid point.
double grid_snap_tolerance(const TimeGrid& grid);

}  // namespace pulsespec
