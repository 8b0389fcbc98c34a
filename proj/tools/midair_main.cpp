// Command-line front end: single encounters, batches, parameter sweeps, and
// the horizontal-advisory comparison. Results land as CSV + manifest files.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "encounter/config.hpp"
#include "encounter/experiments.hpp"
#include "encounter/report.hpp"
#include "encounter/sim.hpp"
#include "nfg/stats.hpp"

namespace fs = std::filesystem;
using namespace encounter;

namespace {

struct CommonOpts {
  std::string config_path;
  uint64_t seed = 42;
  int encounters = 200;
  std::string out_dir = ".";
  int workers = 0;  // 0: MIDAIR_WORKERS or 1
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_encounters) {
  cmd->add_option("--config", o.config_path, "Configuration file (key = value lines)");
  cmd->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  if (with_encounters)
    cmd->add_option("--encounters", o.encounters, "Number of encounters")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Worker threads (0: $MIDAIR_WORKERS or 1)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

EncounterConfig resolve_config(const CommonOpts& o) {
  if (o.config_path.empty()) return EncounterConfig{};
  return load_config(o.config_path);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Shared manifest block: seed/counts/aggregates/timing for one batch.
void append_batch_metadata(Metadata& meta, const BatchResult& b) {
  std::vector<double> f_values;
  for (const OutcomeRecord& r : b.outcomes)
    if (!r.failed && !r.discarded) f_values.push_back(r.F);
  meta.emplace_back("encounters", std::to_string(b.outcomes.size()));
  meta.emplace_back("valid", std::to_string(b.valid));
  meta.emplace_back("failed", std::to_string(b.failed));
  meta.emplace_back("discarded", std::to_string(b.discarded));
  meta.emplace_back("mean_F", fmt(b.mean_F));
  meta.emplace_back("F_standard_error", fmt(nfg::standard_error(f_values)));
  meta.emplace_back("F_ci95_lo", fmt(b.F_ci.first));
  meta.emplace_back("F_ci95_hi", fmt(b.F_ci.second));
  meta.emplace_back("nmac_rate", fmt(b.nmac_rate));
  meta.emplace_back("nmac_ci95_lo", fmt(b.nmac_ci.first));
  meta.emplace_back("nmac_ci95_hi", fmt(b.nmac_ci.second));
  meta.emplace_back("mean_d_min", fmt(b.mean_d_min));
}

std::vector<double> valid_f(const BatchResult& b) {
  std::vector<double> xs;
  for (const OutcomeRecord& r : b.outcomes)
    if (!r.failed && !r.discarded) xs.push_back(r.F);
  return xs;
}

int run_simulate(const CommonOpts& o, bool emit_trajectories) {
  const EncounterConfig cfg = resolve_config(o);
  const auto t0 = std::chrono::steady_clock::now();
  const EncounterResult result = run_encounter(cfg, o.seed, emit_trajectories);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

  fs::create_directories(o.out_dir);
  {
    auto f = open_out(fs::path(o.out_dir) / "outcomes.csv");
    write_outcomes_csv(f, {result.outcome});
  }
  if (emit_trajectories) {
    auto f = open_out(fs::path(o.out_dir) / "trajectory.csv");
    write_trajectory_csv(f, result.trajectory);
  }
  Metadata meta{{"command", "simulate"},
                {"root_seed", std::to_string(o.seed)},
                {"elapsed_seconds", fmt(elapsed.count())}};
  const OutcomeRecord& r = result.outcome;
  meta.emplace_back("d_min", fmt(r.d_min));
  meta.emplace_back("nmac", r.nmac ? "1" : "0");
  meta.emplace_back("F", fmt(r.F));
  meta.emplace_back("discarded", r.discarded ? "1" : "0");
  meta.emplace_back("failed", r.failed ? "1" : "0");
  {
    auto f = open_out(fs::path(o.out_dir) / "manifest.txt");
    write_manifest(f, cfg, meta);
  }
  std::cout << "encounter seed " << o.seed << ": d_min " << fmt(r.d_min) << " ft, F "
            << fmt(r.F) << (r.nmac ? " (NMAC)" : "") << (r.discarded ? " (discarded)" : "")
            << (r.failed ? " (failed: " + r.failure + ")" : "") << "\n";
  return 0;
}

int run_batch_cmd(const CommonOpts& o) {
  const EncounterConfig cfg = resolve_config(o);
  const int workers = resolve_workers(o.workers);
  const auto t0 = std::chrono::steady_clock::now();
  const BatchResult batch = run_batch(cfg, o.encounters, o.seed, workers);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

  fs::create_directories(o.out_dir);
  {
    auto f = open_out(fs::path(o.out_dir) / "outcomes.csv");
    write_outcomes_csv(f, batch.outcomes);
  }
  {
    auto f = open_out(fs::path(o.out_dir) / "histogram.txt");
    f << "F distribution over " << batch.valid << " valid encounters\n"
      << histogram_table(valid_f(batch), 20);
  }
  Metadata meta{{"command", "batch"},
                {"root_seed", std::to_string(o.seed)},
                {"workers", std::to_string(workers)},
                {"elapsed_seconds", fmt(elapsed.count())}};
  append_batch_metadata(meta, batch);
  {
    auto f = open_out(fs::path(o.out_dir) / "manifest.txt");
    write_manifest(f, cfg, meta);
  }
  std::cout << batch_summary(batch);
  return 0;
}

int run_sweep_cmd(const CommonOpts& o, const std::string& param, const std::string& grid) {
  const EncounterConfig cfg = resolve_config(o);
  SweepSpec spec;
  spec.key = param;
  std::istringstream in(grid);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) spec.values.push_back(item);
  }
  const int workers = resolve_workers(o.workers);
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult sweep = run_sweep(cfg, spec, o.encounters, o.seed, workers);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

  fs::create_directories(o.out_dir);
  {
    auto f = open_out(fs::path(o.out_dir) / "sweep.csv");
    write_sweep_csv(f, sweep);
  }
  Metadata meta{{"command", "sweep"},
                {"parameter", spec.key},
                {"points", std::to_string(sweep.cells.size())},
                {"encounters_per_point", std::to_string(o.encounters)},
                {"root_seed", std::to_string(o.seed)},
                {"workers", std::to_string(workers)},
                {"elapsed_seconds", fmt(elapsed.count())}};
  {
    auto f = open_out(fs::path(o.out_dir) / "manifest.txt");
    write_manifest(f, cfg, meta);
  }
  for (const SweepCell& cell : sweep.cells) {
    std::cout << spec.key << " = " << cell.value << ": mean F " << fmt(cell.batch.mean_F)
              << " [" << fmt(cell.batch.F_ci.first) << ", " << fmt(cell.batch.F_ci.second)
              << "], " << cell.batch.valid << " valid\n";
  }
  return 0;
}

int run_horizontal_cmd(const CommonOpts& o) {
  EncounterConfig cfg = resolve_config(o);
  cfg.sim.horizontal_mode = true;
  const int workers = resolve_workers(o.workers);
  const auto t0 = std::chrono::steady_clock::now();
  const HorizontalComparison cmp = run_horizontal_comparison(cfg, o.encounters, o.seed, workers);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

  fs::create_directories(o.out_dir);
  {
    auto f = open_out(fs::path(o.out_dir) / "outcomes_search.csv");
    write_outcomes_csv(f, cmp.with_search.outcomes);
  }
  {
    auto f = open_out(fs::path(o.out_dir) / "outcomes_baseline.csv");
    write_outcomes_csv(f, cmp.baseline.outcomes);
  }
  {
    auto f = open_out(fs::path(o.out_dir) / "histogram.txt");
    f << "F with heading search (" << cmp.with_search.valid << " valid)\n"
      << histogram_table(valid_f(cmp.with_search), 20) << "\nF all-maintain baseline ("
      << cmp.baseline.valid << " valid)\n" << histogram_table(valid_f(cmp.baseline), 20);
  }
  Metadata meta{{"command", "horizontal"},
                {"root_seed", std::to_string(o.seed)},
                {"workers", std::to_string(workers)},
                {"elapsed_seconds", fmt(elapsed.count())},
                {"search_mean_F", fmt(cmp.with_search.mean_F)},
                {"search_valid", std::to_string(cmp.with_search.valid)},
                {"baseline_mean_F", fmt(cmp.baseline.mean_F)},
                {"baseline_valid", std::to_string(cmp.baseline.valid)}};
  append_batch_metadata(meta, cmp.with_search);
  {
    auto f = open_out(fs::path(o.out_dir) / "manifest.txt");
    write_manifest(f, cfg, meta);
  }
  std::cout << "heading search: mean F " << fmt(cmp.with_search.mean_F) << " ("
            << cmp.with_search.valid << " valid)\nall-maintain:   mean F "
            << fmt(cmp.baseline.mean_F) << " (" << cmp.baseline.valid << " valid)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-aircraft encounter simulator and experiment runner"};
  app.require_subcommand(1);

  CommonOpts sim_opts, batch_opts, sweep_opts, horiz_opts;
  bool emit_trajectories = false;
  std::string param, grid;

  CLI::App* simulate = app.add_subcommand("simulate", "Run one encounter");
  sim_opts.seed = 1;
  add_common(simulate, sim_opts, false);
  simulate->add_flag("--emit-trajectories", emit_trajectories,
                     "Write per-step aircraft states to trajectory.csv");

  CLI::App* batch = app.add_subcommand("batch", "Run an encounter ensemble");
  add_common(batch, batch_opts, true);

  CLI::App* sweep = app.add_subcommand("sweep", "Batch at each value of one parameter");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--param", param, "Configuration key to vary (e.g. noise.M_w)")
      ->required();
  sweep->add_option("--grid", grid, "Comma-separated parameter values")->required();

  CLI::App* horizontal =
      app.add_subcommand("horizontal", "Compare heading search against all-maintain");
  add_common(horizontal, horiz_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad flags are configuration errors
  }

  try {
    if (simulate->parsed()) return run_simulate(sim_opts, emit_trajectories);
    if (batch->parsed()) return run_batch_cmd(batch_opts);
    if (sweep->parsed()) return run_sweep_cmd(sweep_opts, param, grid);
    return run_horizontal_cmd(horiz_opts);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
