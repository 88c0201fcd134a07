#include "pulsespec/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace pulsespec {

double max_abs_diff(const TwoLevelOperator& a, const TwoLevelOperator& b) {
  return std::max({std::abs(a.ee - b.ee), std::abs(a.eg - b.eg), std::abs(a.ge - b.ge),
                   std::abs(a.gg - b.gg)});
}

bool validate_density(const TwoLevelOperator& op, double tol) {
  if (!(tol > 0.0)) return false;
  if (std::abs(op.ee.imag()) > tol || std::abs(op.gg.imag()) > tol) return false;
  if (std::abs(op.ge - std::conj(op.eg)) > tol) return false;
  if (std::abs(op.trace() - 1.0) > tol) return false;
  const auto in_unit = [tol](double p) { return p >= -tol && p <= 1.0 + tol; };
  return in_unit(op.ee.real()) && in_unit(op.gg.real());
}

char axis_name(PulseAxis axis) {
  switch (axis) {
    case PulseAxis::X: return 'X';
    case PulseAxis::Y: return 'Y';
    case PulseAxis::Z: return 'Z';
  }
  return '?';
}

PulseSchedule::PulseSchedule(std::vector<PulseEvent> events, double window_end)
    : events_(std::move(events)), window_end_(window_end) {
  if (!(window_end_ > 0.0) || !std::isfinite(window_end_)) {
    throw InvalidParameter("pulse schedule window must be positive and finite");
  }
  double prev = 0.0;
  for (const auto& e : events_) {
    if (!(e.time > prev)) {
      throw InvalidParameter("pulse times must be strictly increasing and positive");
    }
    if (e.time > window_end_) {
      throw InvalidParameter("pulse time lies beyond the observation window");
    }
    prev = e.time;
  }
}

double PulseSchedule::min_gap() const {
  double gap = window_end_;
  double prev = 0.0;
  for (const auto& e : events_) {
    gap = std::min(gap, e.time - prev);
    prev = e.time;
  }
  return gap;
}

std::string PulseSchedule::digest() const {
  // FNV-1a over a canonical rendering of the events.
  std::string canon;
  char buf[64];
  std::snprintf(buf, sizeof buf, "T=%.17g;", window_end_);
  canon += buf;
  for (const auto& e : events_) {
    std::snprintf(buf, sizeof buf, "%.17g%c;", e.time, axis_name(e.axis));
    canon += buf;
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::snprintf(buf, sizeof buf, "n%zu-%016llx", events_.size(),
                static_cast<unsigned long long>(h));
  return buf;
}

void SimParams::validate() const {
  if (!std::isfinite(delta)) throw InvalidParameter("delta must be finite");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidParameter("gamma must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be positive");
  if (!(dt > 0.0) || dt > t_end) throw InvalidParameter("dt must lie in (0, t_end]");
  for (std::size_t i = 1; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > omega_grid[i - 1])) {
      throw InvalidParameter("omega grid must be strictly increasing");
    }
  }
}

void SimParams::validate_window(const PulseSchedule& schedule) const {
  validate();
  if (std::abs(schedule.window_end() - t_end) > 1e-12 * t_end) {
    throw InvalidParameter("t_end does not match the schedule window");
  }
}

void SimParams::validate_against(const PulseSchedule& schedule) const {
  validate_window(schedule);
  if (!schedule.empty() && !(dt < schedule.min_gap() / 10.0)) {
    throw InvalidParameter("dt must be below a tenth of the smallest pulse gap");
  }
}

TimeGrid TimeGrid::make(double t_end, double dt) {
  if (!(t_end > 0.0) || !(dt > 0.0)) throw InvalidParameter("time grid needs positive T and dt");
  const double ratio = t_end / dt;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(ratio)));
  return {steps, t_end / static_cast<double>(steps), t_end};
}

std::vector<double> uniform_omega_grid(double omega_min, double omega_max, double step) {
  if (!(step > 0.0) || !(omega_max >= omega_min)) {
    throw InvalidParameter("omega grid needs step > 0 and omega_max >= omega_min");
  }
  const auto n = static_cast<std::size_t>(std::floor((omega_max - omega_min) / step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = omega_min + static_cast<double>(i) * step;
  return grid;
}

}  // namespace pulsespec
