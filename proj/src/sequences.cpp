#include "pulsespec/sequences.hpp"

#include <cmath>
#include <numbers>

namespace pulsespec {

PulseSchedule periodic_schedule(const std::vector<PulseAxis>& axis_pattern, double tau, int n_pulses) {
  if (axis_pattern.empty()) throw InvalidParameter("periodic schedule: axis pattern is empty");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParameter("periodic schedule: tau must be positive");
  if (n_pulses < 1) throw InvalidParameter("periodic schedule: need at least one pulse");

  std::vector<PulseEvent> events;
  events.reserve(static_cast<std::size_t>(n_pulses));
  for (int k = 1; k <= n_pulses; ++k) {
    events.push_back({k * tau, axis_pattern[static_cast<std::size_t>(k - 1) % axis_pattern.size()]});
  }
  return PulseSchedule(std::move(events), n_pulses * tau);
}

PulseSchedule uhrig_schedule(int n_pulses, double t_end, bool include_final) {
  if (n_pulses < 1) throw InvalidParameter("uhrig schedule: need at least one pulse");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParameter("uhrig schedule: t_end must be positive");

  std::vector<PulseEvent> events;
  const double denom = 2.0 * (n_pulses + 1);
  for (int j = 1; j <= n_pulses; ++j) {
    const double s = std::sin(j * std::numbers::pi / denom);
    events.push_back({t_end * s * s, PulseAxis::X});
  }
  if (include_final) events.push_back({t_end, PulseAxis::X});
  return PulseSchedule(std::move(events), t_end);
}

PulseSchedule no_drive_schedule(double t_end) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParameter("no-drive schedule: t_end must be positive");
  return PulseSchedule({}, t_end);
}

}  // namespace pulsespec
