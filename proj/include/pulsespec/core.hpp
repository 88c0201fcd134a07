#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pulsespec {

using cplx = std::complex<double>;

/// Raised when an operation receives parameters outside its domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// General 2x2 complex operator in the {|e>, |g>} basis.
///
/// Holds the density matrix as well as the non-Hermitian regression seeds
/// sigma_- rho and rho sigma_-, so no structural invariant is enforced here.
struct TwoLevelOperator {
  cplx ee{};
  cplx eg{};
  cplx ge{};
  cplx gg{};

  static constexpr TwoLevelOperator excited() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr TwoLevelOperator ground() { return {0.0, 0.0, 0.0, 1.0}; }

  cplx trace() const { return ee + gg; }

  TwoLevelOperator& operator+=(const TwoLevelOperator& o) {
    ee += o.ee;
    eg += o.eg;
    ge += o.ge;
    gg += o.gg;
    return *this;
  }
  friend TwoLevelOperator operator+(TwoLevelOperator a, const TwoLevelOperator& b) { return a += b; }
  friend TwoLevelOperator operator*(cplx s, const TwoLevelOperator& a) {
    return {s * a.ee, s * a.eg, s * a.ge, s * a.gg};
  }
  friend bool operator==(const TwoLevelOperator&, const TwoLevelOperator&) = default;
};

/// Largest elementwise modulus of a - b.
double max_abs_diff(const TwoLevelOperator& a, const TwoLevelOperator& b);

inline constexpr double kDefaultDensityTolerance = 1e-9;

/// True iff `op` is Hermitian, has unit trace and populations in [0, 1], all within `tol`.
bool validate_density(const TwoLevelOperator& op, double tol = kDefaultDensityTolerance);

/// sigma_- * rho. Only the ge and gg entries survive.
constexpr TwoLevelOperator left_mul_sigma_minus(const TwoLevelOperator& rho) {
  return {0.0, 0.0, rho.ee, rho.eg};
}

/// rho * sigma_-. Only the ee and ge entries survive.
constexpr TwoLevelOperator right_mul_sigma_minus(const TwoLevelOperator& rho) {
  return {rho.eg, 0.0, rho.gg, 0.0};
}

/// sigma_+ * op, used for Tr[sigma_+ X] style expectation values.
constexpr TwoLevelOperator left_mul_sigma_plus(const TwoLevelOperator& op) {
  return {op.ge, op.gg, 0.0, 0.0};
}

enum class PulseAxis { X, Y, Z };

char axis_name(PulseAxis axis);

struct PulseEvent {
  double time = 0.0;
  PulseAxis axis = PulseAxis::X;

  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

/// Ordered instantaneous pulses over the observation window [0, T].
///
/// Construction enforces strictly increasing event times inside (0, T].
class PulseSchedule {
 public:
  PulseSchedule(std::vector<PulseEvent> events, double window_end);

  const std::vector<PulseEvent>& events() const { return events_; }
  double window_end() const { return window_end_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// Smallest spacing between consecutive events, counting the window start.
  /// Returns window_end() for an empty schedule.
  double min_gap() const;

  /// Stable textual fingerprint of the event list and window.
  std::string digest() const;

 private:
  std::vector<PulseEvent> events_;
  double window_end_;
};

struct SimParams {
  double delta = 0.0;
  double gamma = 2.0;
  double t_end = 1.0;
  double dt = 1e-3;
  std::vector<double> omega_grid;

  /// Checks the standalone invariants (positive rates and steps, strictly
  /// increasing frequency grid). Throws InvalidParameter.
  void validate() const;

  /// validate() plus agreement of t_end with the schedule window.
  void validate_window(const PulseSchedule& schedule) const;

  /// validate_window() plus dt below a tenth of the smallest pulse gap.
  void validate_against(const PulseSchedule& schedule) const;
};

/// Uniform time grid on [0, T]. The step is T / steps, with steps the
/// nearest integer to T / dt.
struct TimeGrid {
  std::size_t steps = 0;
  double step = 0.0;
  double end = 0.0;

  static TimeGrid make(double t_end, double dt);

  std::size_t points() const { return steps + 1; }
  double at(std::size_t k) const { return k == steps ? end : static_cast<double>(k) * step; }
};

/// Theta-kernels G1(theta) = int_0^{T-theta} C1(t, theta) dt and likewise G2.
struct CorrelationKernel {
  TimeGrid theta;
  std::vector<cplx> g1;
  std::vector<cplx> g2;
};

struct SpectrumResult {
  std::vector<double> omega;
  std::vector<double> emission;
  std::vector<double> direct_absorption;
  std::vector<double> net_absorption;
  SimParams params;
  std::string schedule_digest;
};

/// Frequencies omega_min, omega_min + step, ... up to omega_max (inclusive within rounding).
std::vector<double> uniform_omega_grid(double omega_min, double omega_max, double step);

}  // namespace pulsespec
