#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pulsespec/cli.hpp"

namespace pulsespec::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

std::vector<std::pair<double, double>> to_delta_weights(const std::string& key, const std::string& v) {
  // "delta:weight,delta:weight,..."
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError(key, "expected delta:weight pairs, got '" + item + "'");
    out.emplace_back(to_double(key, trim(item.substr(0, colon))), to_double(key, trim(item.substr(colon + 1))));
  }
  if (out.empty()) throw ConfigError(key, "no delta:weight pairs given");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"protocol",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         static const std::map<std::string, Protocol> names = {{"none", Protocol::None},
                                                               {"px", Protocol::Px},
                                                               {"pxpy", Protocol::PxPy},
                                                               {"pz", Protocol::Pz},
                                                               {"uhrig", Protocol::Uhrig}};
         const auto it = names.find(v);
         if (it == names.end()) throw ConfigError(k, "unknown protocol '" + v + "'");
         c.protocol = it->second;
       }},
      {"delta", [](RunConfig& c, const std::string& k, const std::string& v) { c.delta = to_double(k, v); }},
      {"gamma", [](RunConfig& c, const std::string& k, const std::string& v) { c.gamma = to_double(k, v); }},
      {"n-pulses", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_pulses = to_int(k, v); }},
      {"tau", [](RunConfig& c, const std::string& k, const std::string& v) { c.tau = to_double(k, v); }},
      {"t-end", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_end = to_double(k, v); }},
      {"include-final",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.include_final = to_bool(k, v); }},
      {"dt", [](RunConfig& c, const std::string& k, const std::string& v) { c.dt = to_double(k, v); }},
      {"omega-min", [](RunConfig& c, const std::string& k, const std::string& v) { c.omega_min = to_double(k, v); }},
      {"omega-max", [](RunConfig& c, const std::string& k, const std::string& v) { c.omega_max = to_double(k, v); }},
      {"omega-step",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.omega_step = to_double(k, v); }},
      {"observable",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "emission") c.observable = Observable::Emission;
         else if (v == "absorption") c.observable = Observable::Absorption;
         else if (v == "both") c.observable = Observable::Both;
         else throw ConfigError(k, "unknown observable '" + v + "'");
       }},
      {"output", [](RunConfig& c, const std::string&, const std::string& v) { c.output_path = v; }},
      {"average-deltas",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.average_deltas = to_delta_weights(k, v); }},
      {"plot-script",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.plot_script = to_bool(k, v); }},
      {"stepper",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "rk4") c.stepper = Stepper::Rk4;
         else if (v == "exact") c.stepper = Stepper::Exact;
         else throw ConfigError(k, "unknown stepper '" + v + "'");
       }},
      {"threads",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const int n = to_int(k, v);
         if (n < 0) throw ConfigError(k, "must be nonnegative");
         c.threads = static_cast<unsigned>(n);
       }},
      {"simd",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v != "auto" && v != "scalar" && v != "avx2") throw ConfigError(k, "unknown SIMD variant '" + v + "'");
         c.simd = v;
       }},
  };
  return table;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError(key, "unknown setting");
  it->second(cfg, key, value);
}

void validate(const RunConfig& c, bool protocol_given) {
  if (!protocol_given) throw ConfigError("protocol", "missing required setting");
  const bool periodic = c.protocol == Protocol::Px || c.protocol == Protocol::PxPy || c.protocol == Protocol::Pz;
  const bool windowed = c.protocol == Protocol::Uhrig || c.protocol == Protocol::None;
  const std::string proto = protocol_name(c.protocol);

  if (periodic && !c.tau) throw ConfigError("tau", "required for protocol " + proto);
  if (!periodic && c.tau) throw ConfigError("tau", "not accepted for protocol " + proto);
  if (windowed && !c.t_end) throw ConfigError("t-end", "required for protocol " + proto);
  if (!windowed && c.t_end) throw ConfigError("t-end", "not accepted for protocol " + proto);
  if (c.protocol != Protocol::None && !c.n_pulses) throw ConfigError("n-pulses", "required for protocol " + proto);
  if (c.protocol == Protocol::None && c.n_pulses) throw ConfigError("n-pulses", "not accepted for protocol none");
  if (c.include_final && c.protocol != Protocol::Uhrig) throw ConfigError("include-final", "only valid for uhrig");

  if (c.n_pulses && *c.n_pulses < 1) throw ConfigError("n-pulses", "must be at least 1");
  if (c.tau && !(*c.tau > 0.0)) throw ConfigError("tau", "must be positive");
  if (c.t_end && !(*c.t_end > 0.0)) throw ConfigError("t-end", "must be positive");
  if (!(c.gamma > 0.0)) throw ConfigError("gamma", "must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(c.omega_step > 0.0)) throw ConfigError("omega-step", "must be positive");
  if (!(c.omega_max >= c.omega_min)) throw ConfigError("omega-max", "must not be below omega-min");
  if (c.output_path.empty()) throw ConfigError("output", "must not be empty");
  if (!c.average_deltas.empty()) {
    double total = 0.0;
    for (const auto& [d, w] : c.average_deltas) {
      if (!(w >= 0.0)) throw ConfigError("average-deltas", "weights must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("average-deltas", "weights must sum to 1");
  }
}

}  // namespace

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::None: return "none";
    case Protocol::Px: return "px";
    case Protocol::PxPy: return "pxpy";
    case Protocol::Pz: return "pz";
    case Protocol::Uhrig: return "uhrig";
  }
  return "?";
}

const char* observable_name(Observable o) {
  switch (o) {
    case Observable::Emission: return "emission";
    case Observable::Absorption: return "absorption";
    case Observable::Both: return "both";
  }
  return "?";
}

namespace {

std::set<std::string> apply_text(RunConfig& cfg, const std::string& text) {
  std::set<std::string> keys;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected key=value, got '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    apply(cfg, key, trim(line.substr(eq + 1)));
    keys.insert(key);
  }
  return keys;
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& text) { apply_text(cfg, text); }

RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& file) {
  CLI::App app{"pulsespec"};
  app.set_help_flag();
  std::map<std::string, std::string> values;
  std::optional<std::string> config_path = file;
  std::string config_arg;
  app.add_option("--config", config_arg, "key=value settings file");
  for (const auto& [key, setter] : setters()) {
    if (key == "include-final" || key == "plot-script") {
      app.add_flag_function("--" + key, [&values, key](std::int64_t) { values[key] = "true"; });
    } else {
      app.add_option_function<std::string>("--" + key, [&values, key](const std::string& v) { values[key] = v; });
    }
  }
  for (const auto& a : args) {
    if (a.rfind("--", 0) != 0) continue;
    const std::string key = a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2);
    if (key != "config" && !setters().contains(key)) throw ConfigError(key, "unknown flag");
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError("", e.what());
  }
  if (app.count("--config") > 0) config_path = config_arg;

  RunConfig cfg;
  bool protocol_given = false;
  if (config_path) {
    std::ifstream f(*config_path);
    if (!f) throw ConfigError("config", "cannot read '" + *config_path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    protocol_given = apply_text(cfg, buf.str()).contains("protocol");
  }
  for (const auto& [key, value] : values) {
    apply(cfg, key, value);
    if (key == "protocol") protocol_given = true;
  }
  validate(cfg, protocol_given);
  return cfg;
}

}  // namespace pulsespec::cli
