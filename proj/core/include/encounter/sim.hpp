#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "encounter/pilot.hpp"

namespace encounter {

// Random head-on-ish geometry: both aircraft are placed so that, flying
// straight, they horizontally pass within gen.horizontal_miss_max of each
// other after a uniform time-to-approach, with a small vertical offset at
// that moment. Throws after repeated draws below gen.min_closing_speed.
WorldState generate_encounter(const GeneratorRanges& g, nfg::RngStream& rng);

// Near mid-air collision: strictly inside both separation thresholds.
bool detect_nmac(const WorldState& s, const SimSettings& sim);

// A pilot who was just shown their first advisory and must now commit to a
// maneuver.
struct PendingDecision {
  int pilot = 0;
  int advisory = kRaNone;
  Vec tcas_frame;  // the sensor values that produced the advisory
};

struct OutcomeRecord {
  uint64_t seed = 0;
  double d_min = 0;        // minimum slant separation over the run
  bool nmac = false;
  double F = 0;            // 0 when an NMAC occurred, d_min otherwise
  bool discarded = false;  // an aircraft's advisory changed after first display
  int ra[2] = {kRaNone, kRaNone};       // first advisory per aircraft
  double t_ra[2] = {-1, -1};            // time of first advisory, -1 if none
  bool decided[2] = {false, false};
  PilotAction action[2];
  bool failed = false;     // a decision process exhausted its sampling budget
  std::string failure;
};

// Per-aircraft trajectory sample.
struct TrajectoryPoint {
  double time = 0;
  int aircraft = 0;
  double x = 0, y = 0, z = 0;
  double heading = 0;
  double vertical_rate = 0;
  double speed = 0;
  int ra = kRaNone;  // advisory in effect for this aircraft at this time
};

// One encounter, advanced in phases so that decision points can be cloned:
//   observe()           sample both sensor frames and advisories, detect
//                       fresh first advisories and advisory changes
//   decision_context()  sample the deciding pilot's kinematic observation
//   set_action()        commit a maneuver (takes effect after the delay)
//   advance()           integrate one step, update intents and termination
// The object is a plain value: copying it forks the encounter, which is how
// counterfactual completions are run.
class EncounterSim {
 public:
  EncounterSim(const WorldState& start, const EncounterConfig& cfg);

  const WorldState& world() const { return s_; }
  bool done() const { return done_; }
  int step_count() const { return steps_; }
  bool had_advisory(int pilot) const { return had_ra_[pilot]; }
  bool has_decided(int pilot) const { return decided_[pilot]; }
  int last_advisory(int pilot) const { return last_advisory_[pilot]; }
  // The sticky advisory a pilot is committed to (their first), none before.
  int advisory_in_effect(int pilot) const { return had_ra_[pilot] ? first_ra_[pilot] : kRaNone; }
  double heading_advisory(int pilot) const { return heading_adv_[pilot]; }

  std::vector<PendingDecision> observe(nfg::RngStream& rng);
  DecisionInputs decision_context(const PendingDecision& pd, nfg::RngStream& rng) const;
  void set_heading_advisory(int pilot, double rate);
  void set_action(int pilot, const PilotAction& a);
  void advance(nfg::RngStream& rng);

  OutcomeRecord outcome() const;

 private:
  EncounterConfig cfg_;
  WorldState s_;
  std::array<ManeuverPlan, 2> plans_{};
  std::array<bool, 2> had_ra_{false, false};
  std::array<int, 2> first_ra_{kRaNone, kRaNone};
  std::array<double, 2> first_ra_time_{-1, -1};
  std::array<int, 2> last_advisory_{kRaNone, kRaNone};
  std::array<bool, 2> decided_{false, false};
  std::array<PilotAction, 2> actions_{};
  std::array<double, 2> heading_adv_{0, 0};
  PassageTracker passage_;
  double min_sep_ = 0;
  int steps_ = 0;
  bool nmac_ = false;
  bool discarded_ = false;
  bool done_ = false;
};

// Runs the pending decisions, then plays the encounter out to termination.
// Sampling-budget failures inside a decision mark the outcome failed instead
// of propagating. Used both for real completions and for the counterfactual
// ones behind the heading-advisory search.
OutcomeRecord complete_encounter(EncounterSim sim, std::vector<PendingDecision> pending,
                                 const EncounterConfig& cfg, nfg::RngStream& rng);

// Score sheet for one candidate turn rate in the heading-advisory search.
struct HeadingCandidateStat {
  double rate = 0;
  double mean_F = 0;       // -inf when no rollout survived to be scored
  int rollouts_used = 0;   // completions that neither failed nor were discarded
  int rollouts_failed = 0; // completions lost to sampling-budget exhaustion
};

// Horizontal mode: choose the heading-rate advisory for `pending[which]` by
// scoring candidate turn rates (hold, moderate and hard turns either way)
// with cfg.horizontal.rollouts counterfactual completions each, run on
// streams derived from `seed` and the current step. Highest mean outcome
// wins; ties prefer holding heading, then the gentler turn. Throws NetError
// when more than half of all rollouts fail. `stats`, if given, receives the
// per-candidate score sheet.
double search_heading_advisory(const EncounterSim& sim,
                               const std::vector<PendingDecision>& pending, size_t which,
                               const EncounterConfig& cfg, uint64_t seed,
                               std::vector<HeadingCandidateStat>* stats = nullptr);

struct EncounterResult {
  OutcomeRecord outcome;
  std::vector<TrajectoryPoint> trajectory;  // empty unless requested
};

// Generates and plays one encounter with all randomness drawn from `seed`.
EncounterResult run_encounter(const EncounterConfig& cfg, uint64_t seed,
                              bool want_trajectory = false);

}  // namespace encounter
