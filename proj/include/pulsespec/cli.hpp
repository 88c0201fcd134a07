#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pulsespec/core.hpp"
#include "pulsespec/dynamics.hpp"

namespace pulsespec::cli {

enum class Protocol { None, Px, PxPy, Pz, Uhrig };
enum class Observable { Emission, Absorption, Both };

/// Bad or inconsistent run configuration. `key()` names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Output or numerical failure during a run.
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Protocol protocol = Protocol::None;
  double delta = 0.0;
  double gamma = 2.0;
  std::optional<int> n_pulses;
  std::optional<double> tau;
  std::optional<double> t_end;
  bool include_final = false;
  double dt = 1e-3;
  double omega_min = -40.0;
  double omega_max = 40.0;
  double omega_step = 0.025;
  Observable observable = Observable::Both;
  std::string output_path = "spectrum.csv";
  std::vector<std::pair<double, double>> average_deltas;  ///< (delta, weight)
  bool plot_script = false;
  Stepper stepper = Stepper::Rk4;
  unsigned threads = 0;
  std::string simd = "auto";
};

const char* protocol_name(Protocol p);
const char* observable_name(Observable o);

/// Parses command-line style arguments (without the program name). Settings
/// from `file`, or from a `--config` argument, are applied first and flags
/// override them. Throws ConfigError.
RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& file = {});

/// Reads `key=value` lines (`#` starts a comment) and applies them to `cfg`.
void apply_config_text(RunConfig& cfg, const std::string& text);

/// Schedule described by a validated configuration.
PulseSchedule make_schedule(const RunConfig& cfg);

/// Simulation parameters described by a validated configuration.
SimParams make_params(const RunConfig& cfg);

/// Runs the pipeline and writes the CSV, the `.meta` sidecar and, if asked,
/// a gnuplot script. Warnings go to `log`. Throws RunError on I/O failure.
SpectrumResult run(const RunConfig& cfg, std::ostream& log);

/// CSV rendering used by run(): header plus one row per frequency.
std::string format_csv(const SpectrumResult& result);

/// Entry point shared by the executable; returns the process exit code.
int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pulsespec::cli
