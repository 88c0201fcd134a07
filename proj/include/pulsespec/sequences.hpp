#pragma once

#include <vector>

#include "pulsespec/core.hpp"

namespace pulsespec {

/// Pulses at k * tau, k = 1..n_pulses, with axes cycling through `axis_pattern`.
/// The window closes at the last pulse.
PulseSchedule periodic_schedule(const std::vector<PulseAxis>& axis_pattern, double tau, int n_pulses);

/// One Uhrig cycle of X pulses: T_j = T sin^2(j pi / (2 (N + 1))), j = 1..N.
/// With `include_final` the closing pulse at T is appended as well.
PulseSchedule uhrig_schedule(int n_pulses, double t_end, bool include_final = false);

/// Free decay over [0, t_end].
PulseSchedule no_drive_schedule(double t_end);

}  // namespace pulsespec
