#pragma once

// Monte-Carlo experiment runner: one axis of a scenario is swept, each
// (value, trial) pair is an independent work item with its own random stream.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "leojadce/scenario.hpp"
#include "leojadce/vbi.hpp"

namespace leojadce {

enum class SweepAxis { kSnr, kLength, kActivity, kDevices, kOrder, kAntennas };

std::string_view axis_name(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kSnr;
  std::vector<double> values;
};

/// Parses "snr=0,10,20".
SweepSpec parse_sweep(std::string_view text);

/// The base config with `axis` set to `value`. L and d values are mapped to
/// dims through default_factorization(). Throws ConfigError if the value is
/// not valid for the base config.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

/// Throws ConfigError unless every value of the sweep is valid for `base`.
void validate_sweep(const ScenarioConfig& base, const SweepSpec& sweep);

struct TrialRecord {
  SweepAxis axis = SweepAxis::kSnr;
  double value = 0.0;
  Algorithm algorithm = Algorithm::kVbi;
  std::size_t trial = 0;
  double pe = 0.0;
  double nmse = 0.0;
  double nmse_active = 0.0;
  int iters = 0;
  double wall_ms = 0.0;
  /// Empty on success; the exception text when the trial failed (metrics NaN).
  std::string error;

  bool failed() const { return !error.empty(); }
};

struct TraceRow {
  std::size_t trial = 0;
  IterationTrace step;
};

struct SweepOptions {
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;
  /// Collect per-iteration VBI traces.
  bool traces = false;
  /// Measure wall time per algorithm run. Off by default so that repeated
  /// runs produce identical records.
  bool timing = false;
};

struct SweepResult {
  /// Sorted by (value position in the sweep, trial, algorithm position).
  std::vector<TrialRecord> records;
  /// Keyed by value position in the sweep.
  std::map<std::size_t, std::vector<TraceRow>> traces;

  std::size_t failures() const;
};

/// Random stream seed of one work item: depends on (master seed, axis value,
/// trial) only, so adding trials or values never perturbs existing ones.
std::uint64_t trial_seed(std::uint64_t master_seed, SweepAxis axis, double value, std::size_t trial);

/// Seed of the per-device LOS directions for a scenario.
std::uint64_t los_seed(std::uint64_t master_seed);

/// Runs a single work item. Engine failures are caught and reported in the
/// records' error field.
std::vector<TrialRecord> run_trial(const ScenarioConfig& point, SweepAxis axis, double value,
                                   std::size_t trial, bool timing = false,
                                   std::vector<TraceRow>* trace = nullptr);

SweepResult run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep, const SweepOptions& opts = {});

struct Stat {
  double mean = 0.0;
  double std = 0.0;   // sample standard deviation, 0 for a single value
  double ci95 = 0.0;  // half-width, 1.96 std / sqrt(n)
  std::size_t n = 0;  // finite values used
};

/// Statistics over the finite entries of `xs`; NaN mean when there are none.
Stat describe(const std::vector<double>& xs);

struct SummaryRow {
  SweepAxis axis = SweepAxis::kSnr;
  double value = 0.0;
  Algorithm algorithm = Algorithm::kVbi;
  std::size_t trials = 0;
  std::size_t failures = 0;
  Stat pe;
  Stat nmse;
  Stat nmse_active;
  Stat iters;
  Stat wall_ms;
};

/// Groups successful records by (value, algorithm), keeping first-appearance
/// order. Throws std::invalid_argument on an empty input.
std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records);

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

/// Shortest round-trippable text for a double ("nan" for NaN).
std::string format_number(double v);

}  // namespace leojadce
