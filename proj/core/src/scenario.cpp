#include "leojadce/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "leojadce/signal.hpp"

namespace leojadce {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kVbi: return "vbi";
    case Algorithm::kSomp: return "somp";
    case Algorithm::kAmp: return "amp";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "vbi") return Algorithm::kVbi;
  if (name == "somp") return Algorithm::kSomp;
  if (name == "amp") return Algorithm::kAmp;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find_first_of(seps, start);
    const auto end = pos == std::string_view::npos ? s.size() : pos;
    out.push_back(trim(s.substr(start, end - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + s + "'");
  }
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  const auto res = std::from_chars(first, last, out);
  if (v.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("key '" + std::string(key) + "': expected a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> kFields = [] {
    std::map<std::string, Field> f;
    auto dbl = [&f](const std::string& name, std::function<double&(ScenarioConfig&)> ref) {
      f[name] = {[ref, name](ScenarioConfig& c, std::string_view v) { ref(c) = to_double(name, v); },
                 [ref](const ScenarioConfig& c) {
                   return fmt_double(ref(const_cast<ScenarioConfig&>(c)));
                 }};
    };
    auto uint = [&f](const std::string& name, std::function<std::size_t&(ScenarioConfig&)> ref) {
      f[name] = {[ref, name](ScenarioConfig& c, std::string_view v) {
                   ref(c) = static_cast<std::size_t>(to_uint(name, v));
                 },
                 [ref](const ScenarioConfig& c) {
                   return std::to_string(ref(const_cast<ScenarioConfig&>(c)));
                 }};
    };
    dbl("carrier_hz", [](ScenarioConfig& c) -> double& { return c.channel.link.carrier_hz; });
    dbl("altitude_m", [](ScenarioConfig& c) -> double& { return c.channel.link.altitude_m; });
    dbl("bandwidth_hz", [](ScenarioConfig& c) -> double& { return c.channel.link.bandwidth_hz; });
    dbl("noise_temp_k", [](ScenarioConfig& c) -> double& { return c.channel.link.noise_temp_k; });
    dbl("boltzmann", [](ScenarioConfig& c) -> double& { return c.channel.link.boltzmann; });
    dbl("g_over_t_db", [](ScenarioConfig& c) -> double& { return c.channel.link.g_over_t_db; });
    dbl("three_db_angle_deg", [](ScenarioConfig& c) -> double& { return c.channel.link.three_db_angle_deg; });
    dbl("rain_mean_db", [](ScenarioConfig& c) -> double& { return c.channel.link.rain_mean_db; });
    dbl("rain_std_db", [](ScenarioConfig& c) -> double& { return c.channel.link.rain_std_db; });
    // "auto" recalibrates the dish to the configured 3 dB angle.
    f["dish_diameter_m"] = {
        [](ScenarioConfig& c, std::string_view v) {
          c.channel.link.dish_diameter_m = v == "auto" ? 0.0 : to_double("dish_diameter_m", v);
        },
        [](const ScenarioConfig& c) { return fmt_double(c.channel.link.dish_diameter_m); }};
    uint("K", [](ScenarioConfig& c) -> std::size_t& { return c.channel.devices; });
    uint("M", [](ScenarioConfig& c) -> std::size_t& { return c.channel.antennas; });
    dbl("p_a", [](ScenarioConfig& c) -> double& { return c.channel.activity; });
    dbl("snr_db", [](ScenarioConfig& c) -> double& { return c.snr_db; });
    dbl("rician_lambda", [](ScenarioConfig& c) -> double& { return c.channel.rician_factor; });
    dbl("los_norm_sq_min", [](ScenarioConfig& c) -> double& { return c.channel.los_norm_sq_min; });
    dbl("los_norm_sq_max", [](ScenarioConfig& c) -> double& { return c.channel.los_norm_sq_max; });
    dbl("nlos_var_min", [](ScenarioConfig& c) -> double& { return c.channel.nlos_var_min; });
    dbl("nlos_var_max", [](ScenarioConfig& c) -> double& { return c.channel.nlos_var_max; });
    dbl("theta_max_deg", [](ScenarioConfig& c) -> double& { return c.channel.theta_max_deg; });
    dbl("tx_power", [](ScenarioConfig& c) -> double& { return c.channel.tx_power; });
    dbl("eps", [](ScenarioConfig& c) -> double& { return c.engine.eps; });
    dbl("rel_tol", [](ScenarioConfig& c) -> double& { return c.engine.rel_tol; });
    dbl("threshold_ratio", [](ScenarioConfig& c) -> double& { return c.engine.threshold_ratio; });
    uint("trials", [](ScenarioConfig& c) -> std::size_t& { return c.trials; });
    f["max_iters"] = {[](ScenarioConfig& c, std::string_view v) {
                        const auto n = to_uint("max_iters", v);
                        if (n > 1000000) throw ConfigError("key 'max_iters': too large");
                        c.engine.max_iters = static_cast<int>(n);
                      },
                      [](const ScenarioConfig& c) { return std::to_string(c.engine.max_iters); }};
    f["master_seed"] = {[](ScenarioConfig& c, std::string_view v) { c.master_seed = to_uint("master_seed", v); },
                        [](const ScenarioConfig& c) { return std::to_string(c.master_seed); }};
    f["dims"] = {[](ScenarioConfig& c, std::string_view v) {
                   c.dims.clear();
                   for (auto part : split(v, "x,")) c.dims.push_back(static_cast<std::size_t>(to_uint("dims", part)));
                 },
                 [](const ScenarioConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.dims.size(); ++i) s += (i ? "x" : "") + std::to_string(c.dims[i]);
                   return s;
                 }};
    f["active_count"] = {[](ScenarioConfig& c, std::string_view v) {
                           if (v == "none") {
                             c.channel.active_count.reset();
                           } else {
                             c.channel.active_count = static_cast<std::size_t>(to_uint("active_count", v));
                           }
                         },
                         [](const ScenarioConfig& c) {
                           return c.channel.active_count ? std::to_string(*c.channel.active_count) : std::string("none");
                         }};
    f["algos"] = {[](ScenarioConfig& c, std::string_view v) { c.algorithms = parse_algorithm_list(v); },
                  [](const ScenarioConfig& c) {
                    std::string s;
                    for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
                      s += (i ? "," : "") + std::string(algorithm_name(c.algorithms[i]));
                    }
                    return s;
                  }};
    return f;
  }();
  return kFields;
}

}  // namespace

std::vector<Algorithm> parse_algorithm_list(std::string_view csv) {
  std::vector<Algorithm> out;
  for (auto part : split(csv, ",")) {
    const Algorithm a = parse_algorithm(part);
    if (std::find(out.begin(), out.end(), a) != out.end()) {
      throw ConfigError("algorithm '" + std::string(part) + "' listed twice");
    }
    out.push_back(a);
  }
  if (out.empty()) throw ConfigError("empty algorithm list");
  return out;
}

std::size_t ScenarioConfig::preamble_length() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

double ScenarioConfig::noise_var() const { return noise_variance(channel.tx_power, snr_db); }

void ScenarioConfig::validate() const {
  try {
    channel.validate();
    engine.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (dims.size() < 2) throw ConfigError("dims: need at least two factors");
  for (auto l : dims) {
    if (l < 2) throw ConfigError("dims: every factor must be >= 2");
  }
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (algorithms.empty()) throw ConfigError("no algorithm selected");
}

ScenarioConfig default_scenario() { return ScenarioConfig{}; }

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> kKeys = [] {
    std::vector<std::string> k;
    for (const auto& [name, field] : fields()) k.push_back(name);
    return k;
  }();
  return kKeys;
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg = default_scenario();
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (auto line : split(text, "\n")) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    try {
      it->second.set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (cfg.channel.link.dish_diameter_m == 0.0) {
    cfg.channel.link.dish_diameter_m = calibrate_dish_diameter(cfg.channel.link);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string format_scenario(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + " = " + field.get(cfg) + "\n";
  return out;
}

}  // namespace leojadce
