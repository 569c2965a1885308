#include "leojadce/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "leojadce/baselines.hpp"
#include "leojadce/detection.hpp"
#include "leojadce/rng.hpp"
#include "leojadce/signal.hpp"

namespace leojadce {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t as_count(SweepAxis axis, double value, double min_value) {
  if (!(value >= min_value) || value != std::floor(value) || value > 1e9) {
    throw ConfigError("sweep axis " + std::string(axis_name(axis)) + ": value " + format_number(value) +
                      " must be an integer >= " + format_number(min_value));
  }
  return static_cast<std::size_t>(value);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kSnr: return "snr";
    case SweepAxis::kLength: return "L";
    case SweepAxis::kActivity: return "p_a";
    case SweepAxis::kDevices: return "K";
    case SweepAxis::kOrder: return "d";
    case SweepAxis::kAntennas: return "M";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view name) {
  for (auto a : {SweepAxis::kSnr, SweepAxis::kLength, SweepAxis::kActivity, SweepAxis::kDevices,
                 SweepAxis::kOrder, SweepAxis::kAntennas}) {
    if (axis_name(a) == name) return a;
  }
  throw ConfigError("unknown sweep axis '" + std::string(name) + "' (expected snr, L, p_a, K, d or M)");
}

SweepSpec parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("sweep must look like axis=v1,v2,...");
  SweepSpec spec;
  spec.axis = parse_axis(text.substr(0, eq));
  std::string_view rest = text.substr(eq + 1);
  while (true) {
    const auto comma = rest.find(',');
    const std::string item(rest.substr(0, comma));
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v)) {
      throw ConfigError("sweep value '" + item + "' is not a finite number");
    }
    spec.values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (spec.values[i] == spec.values[j]) throw ConfigError("sweep value repeated: " + format_number(spec.values[i]));
    }
  }
  return spec;
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
  ScenarioConfig cfg = base;
  try {
    switch (axis) {
      case SweepAxis::kSnr:
        cfg.snr_db = value;
        break;
      case SweepAxis::kLength:
        cfg.dims = default_factorization(as_count(axis, value, 4), base.dims.size());
        break;
      case SweepAxis::kActivity:
        cfg.channel.activity = value;
        break;
      case SweepAxis::kDevices:
        cfg.channel.devices = as_count(axis, value, 1);
        break;
      case SweepAxis::kOrder:
        cfg.dims = default_factorization(base.preamble_length(), as_count(axis, value, 2));
        break;
      case SweepAxis::kAntennas:
        cfg.channel.antennas = as_count(axis, value, 1);
        break;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(axis_name(axis)) + "=" + format_number(value) + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void validate_sweep(const ScenarioConfig& base, const SweepSpec& sweep) {
  if (sweep.values.empty()) throw ConfigError("sweep has no values");
  for (double v : sweep.values) apply_axis(base, sweep.axis, v);
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const TrialRecord& r) { return r.failed(); }));
}

std::uint64_t trial_seed(std::uint64_t master_seed, SweepAxis axis, double value, std::size_t trial) {
  const std::uint64_t tag = mix64(static_cast<std::uint64_t>(axis) + 1) ^ value_tag(value);
  return stream_key(master_seed, tag, trial);
}

std::uint64_t los_seed(std::uint64_t master_seed) { return mix64(master_seed ^ 0x4c4f532d53454544ull); }

std::vector<TrialRecord> run_trial(const ScenarioConfig& point, SweepAxis axis, double value,
                                   std::size_t trial, bool timing, std::vector<TraceRow>* trace) {
  std::vector<TrialRecord> out;
  for (auto algo : point.algorithms) {
    TrialRecord r;
    r.axis = axis;
    r.value = value;
    r.algorithm = algo;
    r.trial = trial;
    out.push_back(r);
  }
  auto fail_all = [&out](const std::string& what) {
    for (auto& r : out) {
      r.error = what;
      r.pe = r.nmse = r.nmse_active = kNaN;
    }
  };

  ChannelConfig chan = point.channel;
  chan.los_seed = los_seed(point.master_seed);
  Rng rng(trial_seed(point.master_seed, axis, value, trial));

  PreambleSet pre;
  ChannelRealization ch;
  DeviceStateMatrix x;
  ComplexTensor y;
  try {
    pre = gen_preambles(point.dims, chan.devices, rng);
    ch = draw_channels(chan, rng);
    x = device_state_matrix(ch);
    y = synthesize_received(pre, x, point.noise_var(), rng);
  } catch (const std::exception& e) {
    fail_all(std::string("setup: ") + e.what());
    return out;
  }
  const bool any_active = ch.active_count() > 0;

  for (auto& r : out) {
    const auto start = std::chrono::steady_clock::now();
    try {
      CMatrix estimate;
      std::vector<std::uint8_t> decided;
      switch (r.algorithm) {
        case Algorithm::kVbi: {
          const EngineResult res = run(pre, y, point.engine);
          const auto det = detect(res.state.mean, point.engine.threshold_ratio, chan.tx_power);
          estimate = res.state.mean;
          decided = det.active;
          r.iters = res.iterations;
          if (trace != nullptr) {
            for (const auto& step : res.trace) trace->push_back({trial, step});
          }
          break;
        }
        case Algorithm::kSomp: {
          const auto res = somp(received_matrix(y), assemble_preamble_matrix(pre),
                                default_somp_config(chan.devices, chan.activity));
          estimate = res.estimate;
          decided = res.active(static_cast<Index>(chan.devices));
          r.iters = static_cast<int>(res.support.size());
          break;
        }
        case Algorithm::kAmp: {
          const auto res = amp_mmv(received_matrix(y), assemble_preamble_matrix(pre), AmpConfig{});
          estimate = res.estimate;
          decided = res.active;
          r.iters = res.iterations;
          break;
        }
      }
      if (timing) r.wall_ms = elapsed_ms(start);
      r.pe = error_probability(decided, ch.active);
      r.nmse = any_active ? nmse(estimate, x) : kNaN;
      r.nmse_active = nmse_active(estimate, x, ch.active);
    } catch (const std::exception& e) {
      r.error = e.what();
      r.pe = r.nmse = r.nmse_active = kNaN;
      if (timing) r.wall_ms = elapsed_ms(start);
    }
  }
  return out;
}

SweepResult run_sweep(const ScenarioConfig& cfg, const SweepSpec& sweep, const SweepOptions& opts) {
  validate_sweep(cfg, sweep);
  std::vector<ScenarioConfig> points;
  for (double v : sweep.values) points.push_back(apply_axis(cfg, sweep.axis, v));

  const std::size_t jobs = points.size() * cfg.trials;
  std::vector<std::vector<TrialRecord>> slots(jobs);
  std::vector<std::vector<TraceRow>> trace_slots(opts.traces ? jobs : 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      const std::size_t vi = j / cfg.trials;
      const std::size_t t = j % cfg.trials;
      slots[j] = run_trial(points[vi], sweep.axis, sweep.values[vi], t, opts.timing,
                           opts.traces ? &trace_slots[j] : nullptr);
    }
  };
  std::size_t threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  // Slots are already in canonical (value, trial, algorithm) order.
  SweepResult result;
  for (std::size_t j = 0; j < jobs; ++j) {
    for (auto& r : slots[j]) result.records.push_back(std::move(r));
    if (opts.traces) {
      auto& rows = result.traces[j / cfg.trials];
      rows.insert(rows.end(), trace_slots[j].begin(), trace_slots[j].end());
    }
  }
  return result;
}

Stat describe(const std::vector<double>& xs) {
  Stat s;
  double sum = 0.0;
  for (double x : xs) {
    if (std::isfinite(x)) {
      sum += x;
      ++s.n;
    }
  }
  if (s.n == 0) {
    s.mean = s.std = s.ci95 = kNaN;
    return s;
  }
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) {
      if (std::isfinite(x)) ss += (x - s.mean) * (x - s.mean);
    }
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  s.ci95 = 1.96 * s.std / std::sqrt(static_cast<double>(s.n));
  return s;
}

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  struct Group {
    SummaryRow row;
    std::vector<double> pe, nmse, nmse_active, iters, wall;
  };
  std::vector<Group> groups;
  for (const auto& r : records) {
    auto it = std::find_if(groups.begin(), groups.end(), [&r](const Group& g) {
      return g.row.axis == r.axis && g.row.value == r.value && g.row.algorithm == r.algorithm;
    });
    if (it == groups.end()) {
      Group g;
      g.row.axis = r.axis;
      g.row.value = r.value;
      g.row.algorithm = r.algorithm;
      groups.push_back(std::move(g));
      it = std::prev(groups.end());
    }
    ++it->row.trials;
    if (r.failed()) {
      ++it->row.failures;
      continue;
    }
    it->pe.push_back(r.pe);
    it->nmse.push_back(r.nmse);
    it->nmse_active.push_back(r.nmse_active);
    it->iters.push_back(r.iters);
    it->wall.push_back(r.wall_ms);
  }
  std::vector<SummaryRow> out;
  for (auto& g : groups) {
    g.row.pe = describe(g.pe);
    g.row.nmse = describe(g.nmse);
    g.row.nmse_active = describe(g.nmse_active);
    g.row.iters = describe(g.iters);
    g.row.wall_ms = describe(g.wall);
    out.push_back(g.row);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "axis,value,algorithm,trial,pe,nmse,nmse_active,iters,wall_ms\n";
  for (const auto& r : records) {
    out << axis_name(r.axis) << ',' << format_number(r.value) << ',' << algorithm_name(r.algorithm) << ','
        << r.trial << ',' << format_number(r.pe) << ',' << format_number(r.nmse) << ','
        << format_number(r.nmse_active) << ',' << r.iters << ',' << format_number(r.wall_ms) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "axis,value,algorithm,trials,failures";
  for (const char* m : {"pe", "nmse", "nmse_active", "iters", "wall_ms"}) {
    out << ',' << m << "_mean," << m << "_std," << m << "_ci95";
  }
  out << '\n';
  for (const auto& r : rows) {
    out << axis_name(r.axis) << ',' << format_number(r.value) << ',' << algorithm_name(r.algorithm) << ','
        << r.trials << ',' << r.failures;
    for (const Stat* s : {&r.pe, &r.nmse, &r.nmse_active, &r.iters, &r.wall_ms}) {
      out << ',' << format_number(s->mean) << ',' << format_number(s->std) << ',' << format_number(s->ci95);
    }
    out << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "trial,iter,residual,max_col_energy,rel_change\n";
  for (const auto& r : rows) {
    out << r.trial << ',' << r.step.iter << ',' << format_number(r.step.residual) << ','
        << format_number(r.step.max_col_energy) << ',' << format_number(r.step.rel_change) << '\n';
  }
}

}  // namespace leojadce
