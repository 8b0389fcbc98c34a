#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "encounter/sim.hpp"

namespace encounter {

// A batch of independent encounters. Encounter i runs on a stream derived
// from (seed, i), so results are identical for any worker count; failed and
// discarded runs are counted but excluded from the aggregates.
struct BatchResult {
  std::vector<OutcomeRecord> outcomes;  // index-aligned with derived seeds
  int valid = 0;
  int failed = 0;
  int discarded = 0;
  double mean_F = 0;
  double mean_d_min = 0;
  double nmac_rate = 0;
  std::pair<double, double> F_ci{0, 0};        // bootstrap 95% for mean F
  std::pair<double, double> nmac_ci{0, 0};     // bootstrap 95% for the NMAC rate
};

// Throws when not a single encounter produced a usable outcome.
BatchResult run_batch(const EncounterConfig& cfg, int encounters, uint64_t seed, int workers);

// One configuration key stepped through a list of values (parsed exactly like
// config-file text, aliases included).
struct SweepSpec {
  std::string key;
  std::vector<std::string> values;
};

struct SweepCell {
  std::string value;
  BatchResult batch;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;
};

// Each point runs a full batch on its own derived seed (points are
// statistically independent, not paired).
SweepResult run_sweep(const EncounterConfig& base, const SweepSpec& spec, int encounters,
                      uint64_t seed, int workers);

// The same encounter geometries played with and without the heading-advisory
// search; the root seed is shared so both arms see identical initial
// conditions.
struct HorizontalComparison {
  BatchResult with_search;  // horizontal mode on
  BatchResult baseline;     // vertical-only responses
};

HorizontalComparison run_horizontal_comparison(const EncounterConfig& cfg, int encounters,
                                               uint64_t seed, int workers);

// Worker-count resolution: an explicit value wins, otherwise the
// MIDAIR_WORKERS environment variable, otherwise 1.
int resolve_workers(int flag_value);

}  // namespace encounter
