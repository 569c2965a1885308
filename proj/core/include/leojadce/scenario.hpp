#pragma once

// Scenario configuration: every physical and algorithmic knob of one
// simulation point, plus the flat key-value file format used by the CLI.
//
// File format: one `key = value` per line, `#` starts a comment, blank lines
// are ignored. Keys are exactly the names listed by scenario_keys(); unknown
// or repeated keys are errors. `dims` is written as 20x20 (or 20,20).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leojadce/channel.hpp"
#include "leojadce/vbi.hpp"

namespace leojadce {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Algorithm { kVbi, kSomp, kAmp };

std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
std::vector<Algorithm> parse_algorithm_list(std::string_view csv);

struct ScenarioConfig {
  ChannelConfig channel;
  double snr_db = 10.0;
  std::vector<std::size_t> dims = {20, 20};
  EngineConfig engine;
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  std::vector<Algorithm> algorithms = {Algorithm::kVbi};

  std::size_t preamble_length() const;
  double noise_var() const;
  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Defaults for every experiment: K=500, M=8, p_a=0.1, SNR=10 dB, L=400=20x20.
ScenarioConfig default_scenario();

const std::vector<std::string>& scenario_keys();

/// Parses the key-value document on top of default_scenario().
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::string& path);
/// Writes every key; parse_scenario(format_scenario(c)) reproduces c.
std::string format_scenario(const ScenarioConfig& cfg);

}  // namespace leojadce
