#include "encounter/world.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "nfg/value.hpp"

namespace encounter {

AircraftState kinematics_step(const AircraftState& a, double dt, const FilterTaus& taus) {
  AircraftState n = a;

  const double cmd_heading_rate = heading_rate_from_roll(a.cmd_roll, a.speed);
  n.heading_rate = a.heading_rate + (dt / taus.heading_rate) * (cmd_heading_rate - a.heading_rate);
  n.vertical_rate =
      a.vertical_rate + (dt / taus.vertical_rate) * (a.cmd_vertical_rate - a.vertical_rate);
  n.speed = a.speed + (dt / taus.speed) * (a.cmd_speed - a.speed);

  // Position and heading integrate the pre-update rates.
  n.heading = a.heading + dt * a.heading_rate;
  n.x = a.x + dt * a.speed * std::cos(a.heading);
  n.y = a.y + dt * a.speed * std::sin(a.heading);
  n.z = a.z + dt * a.vertical_rate;
  return n;
}

double horizontal_separation(const WorldState& s) {
  const double dx = s.aircraft[1].x - s.aircraft[0].x;
  const double dy = s.aircraft[1].y - s.aircraft[0].y;
  return std::hypot(dx, dy);
}

double vertical_separation(const WorldState& s) {
  return std::fabs(s.aircraft[1].z - s.aircraft[0].z);
}

double slant_separation(const WorldState& s) {
  const double dx = s.aircraft[1].x - s.aircraft[0].x;
  const double dy = s.aircraft[1].y - s.aircraft[0].y;
  const double dz = s.aircraft[1].z - s.aircraft[0].z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double horizontal_range_rate(const WorldState& s) {
  const AircraftState& a = s.aircraft[0];
  const AircraftState& b = s.aircraft[1];
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double range = std::hypot(dx, dy);
  if (range == 0) return 0;
  const double dvx = b.speed * std::cos(b.heading) - a.speed * std::cos(a.heading);
  const double dvy = b.speed * std::sin(b.heading) - a.speed * std::sin(a.heading);
  return (dx * dvx + dy * dvy) / range;
}

double min_approach_distance(const std::vector<WorldState>& trajectory) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : trajectory) best = std::min(best, slant_separation(s));
  return best;
}

Vec pack_world(const WorldState& s) {
  Vec v(kWorldDims);
  for (int i = 0; i < 2; ++i) {
    const AircraftState& a = s.aircraft[i];
    double* p = v.data() + i * kAircraftDims;
    p[0] = a.x;
    p[1] = a.y;
    p[2] = a.z;
    p[3] = a.heading;
    p[4] = a.heading_rate;
    p[5] = a.vertical_rate;
    p[6] = a.speed;
    p[7] = a.cmd_roll;
    p[8] = a.cmd_vertical_rate;
    p[9] = a.cmd_speed;
  }
  for (int i = 0; i < 2; ++i) {
    v[2 * kAircraftDims + 2 * i] = s.intents[i].issued ? 1.0 : 0.0;
    v[2 * kAircraftDims + 2 * i + 1] = static_cast<double>(s.intents[i].sense);
  }
  return v;
}

WorldState unpack_world(const Vec& v, double time) {
  if (v.size() != kWorldDims) throw nfg::NetError("world vector has wrong dimension");
  WorldState s;
  s.time = time;
  for (int i = 0; i < 2; ++i) {
    AircraftState& a = s.aircraft[i];
    const double* p = v.data() + i * kAircraftDims;
    a.x = p[0];
    a.y = p[1];
    a.z = p[2];
    a.heading = p[3];
    a.heading_rate = p[4];
    a.vertical_rate = p[5];
    a.speed = p[6];
    a.cmd_roll = p[7];
    a.cmd_vertical_rate = p[8];
    a.cmd_speed = p[9];
    s.intents[i].issued = v[2 * kAircraftDims + 2 * i] != 0.0;
    s.intents[i].sense = static_cast<Sense>(static_cast<int>(v[2 * kAircraftDims + 2 * i + 1]));
  }
  return s;
}

bool PassageTracker::update(double range, double range_rate) {
  if (prev_range_ >= 0 && range > prev_range_ && range_rate > 0) {
    ++increases_;
  } else {
    increases_ = 0;
  }
  prev_range_ = range;
  return increases_ >= 2;
}

void apply_due_maneuver(AircraftState& a, const ManeuverPlan& plan, double time) {
  if (!plan.active || time < plan.start_time) return;
  a.cmd_vertical_rate = plan.vertical_rate;
  if (plan.has_heading_rate) a.cmd_roll = roll_for_heading_rate(plan.heading_rate, a.speed);
}

double rollout_min_separation(WorldState start, const std::array<ManeuverPlan, 2>& plans,
                              double dt, double max_duration, const FilterTaus& taus) {
  WorldState s = start;
  double best = slant_separation(s);
  PassageTracker passage;
  passage.update(horizontal_separation(s), horizontal_range_rate(s));
  const double end_time = start.time + max_duration;
  while (s.time < end_time) {
    for (int i = 0; i < 2; ++i) apply_due_maneuver(s.aircraft[i], plans[i], s.time);
    for (int i = 0; i < 2; ++i) s.aircraft[i] = kinematics_step(s.aircraft[i], dt, taus);
    s.time += dt;
    best = std::min(best, slant_separation(s));
    if (passage.update(horizontal_separation(s), horizontal_range_rate(s))) break;
  }
  return best;
}

}  // namespace encounter
