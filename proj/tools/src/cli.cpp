#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include "leojadce/scenario.hpp"
#include "leojadce/sweep.hpp"

namespace leojadce::cli {

namespace {

namespace fs = std::filesystem;

struct RunArgs {
  std::string config;
  std::string sweep;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string algos;
  bool trace = false;
  bool timing = false;
  std::size_t threads = 0;
};

void write_file(const fs::path& path, const auto& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  writer(f);
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

int do_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  SweepSpec sweep;
  try {
    cfg = load_scenario(a.config);
    if (a.trials) cfg.trials = *a.trials;
    if (a.seed) cfg.master_seed = *a.seed;
    if (!a.algos.empty()) cfg.algorithms = parse_algorithm_list(a.algos);
    cfg.validate();
    if (a.sweep.empty()) {
      sweep = {SweepAxis::kSnr, {cfg.snr_db}};
    } else {
      sweep = parse_sweep(a.sweep);
    }
    validate_sweep(cfg, sweep);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "cannot create output directory " << dir << ": " << ec.message() << '\n';
    return kExitConfigError;
  }

  SweepOptions opts;
  opts.threads = a.threads;
  opts.traces = a.trace;
  opts.timing = a.timing;
  const SweepResult res = run_sweep(cfg, sweep, opts);

  write_file(dir / "trials.csv", [&](std::ostream& f) { write_trials_csv(f, res.records); });
  write_file(dir / "summary.csv", [&](std::ostream& f) { write_summary_csv(f, aggregate(res.records)); });
  write_file(dir / "config.txt", [&](std::ostream& f) { f << format_scenario(cfg); });
  if (a.trace) {
    for (const auto& [vi, rows] : res.traces) {
      const auto name = "trace_" + std::string(axis_name(sweep.axis)) + "_" + format_number(sweep.values[vi]) + ".csv";
      write_file(dir / name, [&](std::ostream& f) { write_trace_csv(f, rows); });
    }
  }

  out << "wrote " << res.records.size() << " records to " << dir.string() << '\n';
  if (const auto failed = res.failures(); failed > 0) {
    err << failed << " trial run(s) failed; first error: ";
    for (const auto& r : res.records) {
      if (r.failed()) {
        err << axis_name(r.axis) << '=' << format_number(r.value) << " trial " << r.trial << " ("
            << algorithm_name(r.algorithm) << "): " << r.error << '\n';
        break;
      }
    }
    return kExitTrialFailure;
  }
  return kExitOk;
}

int do_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = load_scenario(path);
    out << "ok: K=" << cfg.channel.devices << " M=" << cfg.channel.antennas << " L=" << cfg.preamble_length()
        << " d=" << cfg.dims.size() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint activity detection and channel estimation for LEO satellite IoT"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a Monte-Carlo sweep and write CSV results");
  run_cmd->add_option("--config", run.config, "Scenario config file")->required();
  run_cmd->add_option("--sweep", run.sweep, "axis=v1,v2,... with axis in {snr, L, p_a, K, d, M}");
  run_cmd->add_option("--trials", run.trials, "Trials per axis value (overrides the config)");
  run_cmd->add_option("--seed", run.seed, "Master seed (overrides the config)");
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
  run_cmd->add_option("--algos", run.algos, "Comma-separated subset of vbi,somp,amp");
  run_cmd->add_flag("--trace", run.trace, "Write per-iteration VBI traces");
  run_cmd->add_flag("--timing", run.timing, "Record wall time per run (makes output non-reproducible)");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a config file");
  validate_cmd->add_option("--config", validate_path, "Scenario config file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitConfigError;
  }

  if (run_cmd->parsed()) return do_run(run, out, err);
  return do_validate(validate_path, out, err);
}

}  // namespace leojadce::cli
