#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pulsespec/cli.hpp"
#include "pulsespec/sequences.hpp"
#include "pulsespec/simd.hpp"
#include "pulsespec/spectra.hpp"

namespace pulsespec::cli {
namespace {

constexpr const char* kUsage = R"(usage: pulsespec --protocol {none,px,pxpy,pz,uhrig} [options]

Emission and absorption spectra of a pulse-driven two-level emitter.

  --protocol P          pulse protocol (required)
  --delta D             emitter detuning from the carrier (default 0)
  --gamma G             spontaneous emission rate (default 2)
  --n-pulses N          number of pulses (all protocols except none)
  --tau T               pulse spacing (px, pxpy, pz)
  --t-end T             observation window (uhrig, none)
  --include-final       uhrig: also pulse at t = T
  --dt H                integration step (default 1e-3)
  --omega-min/--omega-max/--omega-step
                        detector frequency grid (default -40, 40, 0.025)
  --observable O        emission, absorption or both (default both)
  --average-deltas L    ensemble average, e.g. 3:0.25,4:0.25,5:0.25,6:0.25
  --output PATH         CSV destination (default spectrum.csv)
  --plot-script         also write a gnuplot script next to the CSV
  --stepper S           rk4 (default) or exact
  --threads N           worker threads (0 = all cores)
  --simd V              auto, scalar or avx2
  --config FILE         key=value settings; flags take precedence
)";

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw RunError("cannot open '" + path.string() + "' for writing");
  f << content;
  f.close();
  if (!f) throw RunError("failed writing '" + path.string() + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string meta_text(const RunConfig& cfg, const SimParams& params, const SpectrumResult& res) {
  std::ostringstream m;
  m << "protocol=" << protocol_name(cfg.protocol) << '\n';
  m << "delta=" << fmt(cfg.delta) << '\n';
  m << "gamma=" << fmt(cfg.gamma) << '\n';
  if (cfg.n_pulses) m << "n_pulses=" << *cfg.n_pulses << '\n';
  if (cfg.tau) m << "tau=" << fmt(*cfg.tau) << '\n';
  m << "t_end=" << fmt(params.t_end) << '\n';
  if (cfg.protocol == Protocol::Uhrig) m << "include_final=" << (cfg.include_final ? "true" : "false") << '\n';
  m << "dt=" << fmt(cfg.dt) << '\n';
  m << "grid_steps=" << TimeGrid::make(params.t_end, params.dt).steps << '\n';
  m << "omega_min=" << fmt(cfg.omega_min) << '\n';
  m << "omega_max=" << fmt(cfg.omega_max) << '\n';
  m << "omega_step=" << fmt(cfg.omega_step) << '\n';
  m << "omega_points=" << res.omega.size() << '\n';
  m << "observable=" << observable_name(cfg.observable) << '\n';
  if (!cfg.average_deltas.empty()) {
    m << "average_deltas=";
    for (std::size_t i = 0; i < cfg.average_deltas.size(); ++i) {
      m << (i ? "," : "") << fmt(cfg.average_deltas[i].first) << ':' << fmt(cfg.average_deltas[i].second);
    }
    m << '\n';
  }
  m << "stepper=" << (cfg.stepper == Stepper::Rk4 ? "rk4" : "exact") << '\n';
  m << "simd=" << simd::isa_name(simd::active_isa()) << '\n';
  m << "schedule_digest=" << res.schedule_digest << '\n';
  return m.str();
}

std::string plot_text(const RunConfig& cfg, const std::filesystem::path& csv) {
  std::ostringstream g;
  g << "# gnuplot script\n";
  g << "set datafile separator ','\n";
  g << "set key autotitle columnhead\n";
  g << "set xlabel 'omega'\n";
  g << "set ylabel 'spectrum (arb. units)'\n";
  g << "set xrange [" << fmt(cfg.omega_min) << ":" << fmt(cfg.omega_max) << "]\n";
  const std::string file = "'" + csv.filename().string() + "'";
  switch (cfg.observable) {
    case Observable::Emission: g << "plot " << file << " using 1:2 with lines\n"; break;
    case Observable::Absorption: g << "plot " << file << " using 1:4 with lines\n"; break;
    case Observable::Both:
      g << "plot " << file << " using 1:2 with lines, " << file << " using 1:4 with lines\n";
      break;
  }
  return g.str();
}

}  // namespace

PulseSchedule make_schedule(const RunConfig& cfg) {
  switch (cfg.protocol) {
    case Protocol::None: return no_drive_schedule(cfg.t_end.value());
    case Protocol::Px: return periodic_schedule({PulseAxis::X}, cfg.tau.value(), cfg.n_pulses.value());
    case Protocol::PxPy:
      return periodic_schedule({PulseAxis::X, PulseAxis::Y}, cfg.tau.value(), cfg.n_pulses.value());
    case Protocol::Pz: return periodic_schedule({PulseAxis::Z}, cfg.tau.value(), cfg.n_pulses.value());
    case Protocol::Uhrig: return uhrig_schedule(cfg.n_pulses.value(), cfg.t_end.value(), cfg.include_final);
  }
  throw ConfigError("protocol", "unhandled protocol");
}

SimParams make_params(const RunConfig& cfg) {
  SimParams p;
  p.delta = cfg.delta;
  p.gamma = cfg.gamma;
  p.dt = cfg.dt;
  p.t_end = make_schedule(cfg).window_end();
  p.omega_grid = uniform_omega_grid(cfg.omega_min, cfg.omega_max, cfg.omega_step);
  return p;
}

std::string format_csv(const SpectrumResult& r) {
  std::string out = "omega,emission,direct_absorption,net_absorption\n";
  out.reserve(out.size() + r.omega.size() * 64);
  char buf[128];
  for (std::size_t i = 0; i < r.omega.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", r.omega[i], r.emission[i],
                  r.direct_absorption[i], r.net_absorption[i]);
    out += buf;
  }
  return out;
}

SpectrumResult run(const RunConfig& cfg, std::ostream& log) {
  const auto schedule = make_schedule(cfg);
  const auto params = make_params(cfg);
  try {
    params.validate_against(schedule);
  } catch (const InvalidParameter& e) {
    throw ConfigError("dt", e.what());
  }
  KernelOptions opts;
  opts.stepper = cfg.stepper;
  opts.threads = cfg.threads;

  SpectrumResult result;
  if (cfg.average_deltas.empty()) {
    const auto kernel = accumulate_kernel(schedule, params, opts);
    result = spectrum_from_kernel(kernel, params.omega_grid, cfg.threads);
    result.params = params;
    result.schedule_digest = schedule.digest();
    if (result.omega.front() <= -40.0 && result.omega.back() >= 40.0 && cfg.omega_step <= 0.05) {
      const auto rule = emission_sum_rule(result, kernel);
      if (rule.rhs > 0.0 && std::abs(rule.lhs / rule.rhs - 1.0) > 0.10) {
        log << "warning: emission sum rule off by more than 10% (" << rule.lhs << " vs " << rule.rhs << ")\n";
      }
      if (rule.edge_warning) log << "warning: emission not negligible at the frequency grid edge\n";
    }
  } else {
    std::vector<double> deltas, weights;
    for (const auto& [d, w] : cfg.average_deltas) {
      deltas.push_back(d);
      weights.push_back(w);
    }
    result = detuning_average(schedule, params, deltas, weights, opts);
  }

  const std::filesystem::path csv(cfg.output_path);
  write_file(csv, format_csv(result));
  auto meta = csv;
  meta.replace_extension(".meta");
  write_file(meta, meta_text(cfg, params, result));
  if (cfg.plot_script) {
    auto gp = csv;
    gp.replace_extension(".gp");
    write_file(gp, plot_text(cfg, csv));
  }
  return result;
}

int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  for (const auto& a : args) {
    if (a == "-h" || a == "--help") {
      out << kUsage;
      return 0;
    }
  }
  RunConfig cfg;
  try {
    cfg = parse_config(args);
    if (cfg.simd == "scalar") simd::set_active_isa(simd::Isa::Scalar);
    else if (cfg.simd == "avx2") simd::set_active_isa(simd::Isa::Avx2);
    else simd::set_active_isa(simd::best_isa());
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    const auto res = run(cfg, err);
    const bool absorption = cfg.observable == Observable::Absorption;
    const auto& curve = absorption ? res.net_absorption : res.emission;
    out << "wrote " << res.omega.size() << " rows to " << cfg.output_path << '\n';
    out << (absorption ? "net absorption" : "emission") << " maximum at omega = " << fmt(res.omega[argmax(curve)])
        << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace pulsespec::cli
