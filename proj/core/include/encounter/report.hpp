#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "encounter/experiments.hpp"

namespace encounter {

// Per-encounter outcomes. Columns:
//   seed,d_min,nmac,F,discarded,ra1,ra2,action1,action2,t_ra1,t_ra2
// Advisories are written by name, flags as 0/1; actions (commanded vertical
// rate) and advisory times are left empty when the event never happened.
void write_outcomes_csv(std::ostream& out, const std::vector<OutcomeRecord>& outcomes);

// Columns: time,aircraft,x,y,z,theta,z_dot,f,ra
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& rows);

// One row per sweep point. Columns:
//   key,value,encounters,valid,failed,discarded,mean_F,F_lo,F_hi,
//   nmac_rate,nmac_lo,nmac_hi,mean_d_min
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// Plain-text "key = value" manifest: run metadata first, then the full
// configuration echo, in a stable order.
void write_manifest(std::ostream& out, const EncounterConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& metadata);

// Fixed-width text histogram, one "[lo, hi) bar count" line per bin.
std::string histogram_table(const std::vector<double>& values, int bins);

// Human-readable aggregate block for one batch.
std::string batch_summary(const BatchResult& b);

}  // namespace encounter
