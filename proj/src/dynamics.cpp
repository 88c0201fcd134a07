#include "pulsespec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace pulsespec {
namespace {

constexpr cplx kI{0.0, 1.0};

TwoLevelOperator step_with(Stepper stepper, const TwoLevelOperator& op, double h, double delta,
                           double gamma) {
  return stepper == Stepper::Rk4 ? rk4_step(op, h, delta, gamma)
                                 : free_propagator_exact(op, h, delta, gamma);
}

// Grid index whose point lies within the snap tolerance of t, if any.
std::optional<std::size_t> snap_to_grid(const TimeGrid& grid, double t) {
  const double k = std::round(t / grid.step);
  if (k < 0.0 || k > static_cast<double>(grid.steps)) return std::nullopt;
  const auto idx = static_cast<std::size_t>(k);
  if (std::abs(t - grid.at(idx)) <= grid_snap_tolerance(grid)) return idx;
  return std::nullopt;
}

struct Breakpoint {
  double t;
  std::optional<std::size_t> grid;
  std::optional<PulseAxis> pulse;
};

}  // namespace

TwoLevelOperator free_derivative(const TwoLevelOperator& op, double delta, double gamma) {
  const cplx ge_rate{-0.5 * gamma, delta};
  const cplx eg_rate{-0.5 * gamma, -delta};
  return {-gamma * op.ee, eg_rate * op.eg, ge_rate * op.ge, gamma * op.ee};
}

TwoLevelOperator free_propagator_exact(const TwoLevelOperator& op, double dt, double delta,
                                       double gamma) {
  if (dt == 0.0) return op;
  const double decay = std::exp(-gamma * dt);
  const double coh = std::exp(-0.5 * gamma * dt);
  const cplx ge_factor = coh * std::exp(kI * (delta * dt));
  return {op.ee * decay, op.eg * std::conj(ge_factor), op.ge * ge_factor,
          op.gg + op.ee * (1.0 - decay)};
}

TwoLevelOperator rk4_step(const TwoLevelOperator& op, double dt, double delta, double gamma) {
  const auto k1 = free_derivative(op, delta, gamma);
  const auto k2 = free_derivative(op + (0.5 * dt) * k1, delta, gamma);
  const auto k3 = free_derivative(op + (0.5 * dt) * k2, delta, gamma);
  const auto k4 = free_derivative(op + dt * k3, delta, gamma);
  return op + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

TwoLevelOperator apply_pulse(const TwoLevelOperator& op, PulseAxis axis) {
  switch (axis) {
    case PulseAxis::X: return {op.gg, op.ge, op.eg, op.ee};
    case PulseAxis::Y: return {op.gg, -op.ge, -op.eg, op.ee};
    case PulseAxis::Z: return {op.ee, -op.eg, -op.ge, op.gg};
  }
  return op;
}

double grid_snap_tolerance(const TimeGrid& grid) { return 1e-9 * grid.step; }

std::size_t grid_index_of(const TimeGrid& grid, double t) {
  const auto idx = snap_to_grid(grid, t);
  if (!idx) throw InvalidParameter("time is not on the integration grid");
  return *idx;
}

TwoLevelOperator evolve_operator(const TwoLevelOperator& op, double t_from, double t_to,
                                 const PulseSchedule& schedule, const SimParams& params,
                                 Stepper stepper) {
  if (t_from > t_to) throw InvalidInterval("evolve_operator: t_from exceeds t_to");
  const double window = schedule.window_end();
  if (t_from < 0.0 || t_to > window * (1.0 + 1e-12)) {
    throw InvalidInterval("evolve_operator: interval leaves the observation window");
  }
  const auto grid = TimeGrid::make(window, params.dt);
  const double eps = grid_snap_tolerance(grid);

  auto start_grid = snap_to_grid(grid, t_from);
  auto end_grid = snap_to_grid(grid, t_to);
  if (start_grid) t_from = grid.at(*start_grid);
  if (end_grid) t_to = grid.at(*end_grid);
  if (t_to - t_from <= eps) return op;

  // Breakpoints: interior grid points, pulse times in (t_from, t_to], and t_to.
  std::vector<Breakpoint> points;
  {
    std::size_t k = start_grid ? *start_grid + 1
                               : static_cast<std::size_t>(std::floor(t_from / grid.step)) + 1;
    for (; k <= grid.steps && grid.at(k) < t_to - eps; ++k) points.push_back({grid.at(k), k, {}});
  }
  points.push_back({t_to, end_grid, {}});

  const auto& events = schedule.events();
  auto it = std::upper_bound(events.begin(), events.end(), t_from + eps,
                             [](double t, const PulseEvent& e) { return t < e.time; });
  for (; it != events.end() && it->time <= t_to + eps; ++it) {
    if (auto g = snap_to_grid(grid, it->time)) {
      auto pos = std::find_if(points.begin(), points.end(),
                              [&](const Breakpoint& b) { return b.grid == g; });
      if (pos != points.end()) {
        pos->pulse = it->axis;
        continue;
      }
    }
    const double t = std::min(it->time, t_to);
    auto pos = std::lower_bound(points.begin(), points.end(), t,
                                [](const Breakpoint& b, double v) { return b.t < v; });
    if (pos != points.end() && std::abs(pos->t - t) <= eps) {
      pos->pulse = it->axis;
    } else {
      points.insert(pos, {t, std::nullopt, it->axis});
    }
  }

  TwoLevelOperator state = op;
  double t = t_from;
  std::optional<std::size_t> at_grid = start_grid;
  for (const auto& b : points) {
    // Whole grid intervals use the exact step so identical intervals map identically.
    const double h = (at_grid && b.grid && *b.grid == *at_grid + 1) ? grid.step : b.t - t;
    if (h > 0.0) state = step_with(stepper, state, h, params.delta, params.gamma);
    if (b.pulse) state = apply_pulse(state, *b.pulse);
    t = b.t;
    at_grid = b.grid;
  }
  return state;
}

std::vector<TwoLevelOperator> evolve_path(const TwoLevelOperator& op, std::size_t k_from,
                                          const PulseSchedule& schedule, const SimParams& params,
                                          Stepper stepper) {
  const auto grid = TimeGrid::make(schedule.window_end(), params.dt);
  if (k_from > grid.steps) throw InvalidInterval("evolve_path: start index beyond the grid");
  std::vector<TwoLevelOperator> path;
  path.reserve(grid.points() - k_from);
  path.push_back(op);
  for (std::size_t k = k_from; k < grid.steps; ++k) {
    path.push_back(evolve_operator(path.back(), grid.at(k), grid.at(k + 1), schedule, params, stepper));
  }
  return path;
}

Trajectory density_trajectory(const PulseSchedule& schedule, const SimParams& params,
                              Stepper stepper) {
  params.validate_window(schedule);
  Trajectory traj;
  traj.grid = TimeGrid::make(schedule.window_end(), params.dt);
  traj.states = evolve_path(TwoLevelOperator::excited(), 0, schedule, params, stepper);
  return traj;
}

}  // namespace pulsespec
