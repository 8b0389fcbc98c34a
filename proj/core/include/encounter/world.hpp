#pragma once

#include <array>

#include "nfg/value.hpp"

namespace encounter {

using nfg::Vec;

// Gravitational acceleration, ft/s^2; couples commanded roll to heading rate.
inline constexpr double kGravity = 32.17;

// Kinematic state of one aircraft plus its current autopilot commands.
// Positions in ft, heading in rad, rates per second.
struct AircraftState {
  double x = 0;
  double y = 0;
  double z = 0;
  double heading = 0;        // theta
  double heading_rate = 0;   // theta_dot
  double vertical_rate = 0;  // z_dot
  double speed = 0;          // f, forward speed, > 0
  double cmd_roll = 0;       // phi_c
  double cmd_vertical_rate = 0;
  double cmd_speed = 0;
};

// Vertical direction of an advisory, also used for coordination between the
// two collision-avoidance units.
enum class Sense { up = 0, level = 1, down = 2 };

// Whether an aircraft has announced an advisory, and in which direction.
struct TcasIntent {
  bool issued = false;
  Sense sense = Sense::level;  // meaningful only when issued
};

struct WorldState {
  std::array<AircraftState, 2> aircraft;
  std::array<TcasIntent, 2> intents;
  double time = 0;
};

// First-order response times of the heading-rate, vertical-rate, and speed
// filters (seconds).
struct FilterTaus {
  double heading_rate = 2.0;
  double vertical_rate = 3.0;
  double speed = 5.0;
};

// Heading-rate command implied by a commanded roll angle at forward speed f
// (coordinated-turn small-angle relation), and its inverse.
inline double heading_rate_from_roll(double cmd_roll, double speed) {
  return kGravity * cmd_roll / speed;
}
inline double roll_for_heading_rate(double heading_rate, double speed) {
  return heading_rate * speed / kGravity;
}

// One forward-Euler step: the three rate filters move toward their commands,
// then position and heading integrate using the rates from *before* the
// filter update.
AircraftState kinematics_step(const AircraftState& a, double dt, const FilterTaus& taus);

// Plain geometric separations between the two aircraft.
double horizontal_separation(const WorldState& s);
double vertical_separation(const WorldState& s);
double slant_separation(const WorldState& s);
// d/dt of horizontal range; 0 when the aircraft are horizontally coincident.
double horizontal_range_rate(const WorldState& s);

double min_approach_distance(const std::vector<WorldState>& trajectory);

// --- Flat encodings -------------------------------------------------------
// The decision net exchanges states as flat vectors. Layout: 10 kinematic
// entries per aircraft in declaration order, then (issued, sense) per
// aircraft. Total 24.
inline constexpr int kAircraftDims = 10;
inline constexpr int kWorldDims = 24;

Vec pack_world(const WorldState& s);
WorldState unpack_world(const Vec& v, double time = 0);

// Detects "the aircraft have passed each other": horizontal range strictly
// increased over two consecutive steps while the range rate is positive.
class PassageTracker {
 public:
  // Feed once per step; returns true once passage is established.
  bool update(double range, double range_rate);

 private:
  double prev_range_ = -1;
  int increases_ = 0;
};

// Extra vertical-rate / heading-rate targets a pilot has committed to, taking
// effect after a reaction delay.
struct ManeuverPlan {
  bool active = false;
  double start_time = 0;        // command switches once time >= start_time
  double vertical_rate = 0;
  bool has_heading_rate = false;
  double heading_rate = 0;
};

// Applies any due maneuver to the command channels of one aircraft.
void apply_due_maneuver(AircraftState& a, const ManeuverPlan& plan, double time);

// Deterministic completion of an encounter from `start`, used as the imagined
// outcome when scoring candidate maneuvers: both aircraft fly their current
// commands, switch to their planned maneuvers when due, and integrate until
// passage or `max_duration`. Returns the minimum slant separation seen.
double rollout_min_separation(WorldState start, const std::array<ManeuverPlan, 2>& plans,
                              double dt, double max_duration, const FilterTaus& taus);

}  // namespace encounter
