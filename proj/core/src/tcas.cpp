#include "encounter/tcas.hpp"

#include <cmath>

namespace encounter {

const char* ra_name(int ra_index) {
  switch (ra_index) {
    case 0: return "none";
    case 1: return "-42";
    case 2: return "-25";
    case 3: return "0";
    case 4: return "+25";
    case 5: return "+42";
  }
  throw nfg::NetError("advisory index out of range");
}

int ra_index_from_name(const std::string& name) {
  for (int i = 0; i < kRaCount; ++i)
    if (name == ra_name(i)) return i;
  throw nfg::NetError("unknown advisory name: " + name);
}

Vec pack_tcas_observation(const TcasObservation& o) {
  return Vec{o.range, o.range_rate, o.closure_rate, o.altitude_offset, o.own_altitude};
}

TcasObservation unpack_tcas_observation(const Vec& v) {
  if (v.size() != kTcasObsDims) throw nfg::NetError("observation vector has wrong dimension");
  TcasObservation o;
  o.range = v[0];
  o.range_rate = v[1];
  o.closure_rate = v[2];
  o.altitude_offset = v[3];
  o.own_altitude = v[4];
  return o;
}

TcasObservation tcas_geometry(const WorldState& s, int own) {
  const AircraftState& me = s.aircraft[own];
  const AircraftState& them = s.aircraft[1 - own];

  TcasObservation o;
  const double dx = them.x - me.x;
  const double dy = them.y - me.y;
  o.range = std::hypot(dx, dy);
  if (o.range == 0) {
    o.range_rate = 0;
    o.coincident = true;
  } else {
    const double dvx = them.speed * std::cos(them.heading) - me.speed * std::cos(me.heading);
    const double dvy = them.speed * std::sin(them.heading) - me.speed * std::sin(me.heading);
    o.range_rate = (dx * dvx + dy * dvy) / o.range;
  }
  o.closure_rate = them.vertical_rate - me.vertical_rate;
  o.altitude_offset = them.z - me.z;
  o.own_altitude = me.z;
  return o;
}

TcasObservation tcas_observe(const WorldState& s, int own, double noise_scale,
                             nfg::RngStream& rng) {
  TcasObservation o = tcas_geometry(s, own);
  if (noise_scale > 0) {
    o.range += rng.gaussian(0, noise_scale * kTcasNoiseSigma[0]);
    o.range_rate += rng.gaussian(0, noise_scale * kTcasNoiseSigma[1]);
    o.closure_rate += rng.gaussian(0, noise_scale * kTcasNoiseSigma[2]);
    o.altitude_offset += rng.gaussian(0, noise_scale * kTcasNoiseSigma[3]);
    o.own_altitude += rng.gaussian(0, noise_scale * kTcasNoiseSigma[4]);
    o.range = std::max(0.0, o.range);
  }
  return o;
}

namespace {

// Projected vertical offset at the (capped) closest approach if own aircraft
// holds rate `a` once it reacts. The observation carries only the relative
// vertical rate, so the own maneuver enters as a delta on that rate.
double projected_miss(const TcasObservation& obs, double horizon, double react_time, double a) {
  return obs.altitude_offset + obs.closure_rate * react_time +
         (horizon - react_time) * (obs.closure_rate - a);
}

}  // namespace

int mini_tcas(const TcasObservation& obs, const TcasIntent& /*own_intent*/,
              const TcasIntent& intruder_intent, const TcasParams& params) {
  const bool converging = obs.range_rate < 0;
  const double tcpa = converging ? obs.range / -obs.range_rate : 0.0;

  // Detection: all three tests must pass.
  const bool range_test =
      obs.range <= params.dmod ||
      (converging && (obs.range - params.dmod) / -obs.range_rate <= params.tau);
  const double h = obs.altitude_offset;
  const double hd = obs.closure_rate;
  const bool altitude_test =
      std::fabs(h) <= params.zthr || (h * hd < 0 && std::fabs(h) / std::fabs(hd) <= params.tau);
  const double horizon = std::min(tcpa, params.tau);
  const bool separation_test = std::fabs(h + hd * horizon) <= params.zthr;
  if (!(range_test && altitude_test && separation_test)) return kRaNone;

  // Sense: maximize projected miss distance at the strong rate, skipping the
  // sense the intruder has announced. Fixed candidate order breaks ties.
  const double react = std::min(params.pilot_delay, horizon);
  struct SenseOption {
    Sense sense;
    double strong_rate;
  };
  const SenseOption options[] = {
      {Sense::up, 42.0}, {Sense::level, 0.0}, {Sense::down, -42.0}};
  bool found = false;
  SenseOption chosen{Sense::level, 0.0};
  double best = 0;
  for (const auto& opt : options) {
    if (intruder_intent.issued && intruder_intent.sense == opt.sense) continue;
    const double miss = std::fabs(projected_miss(obs, horizon, react, opt.strong_rate));
    if (!found || miss > best) {
      found = true;
      chosen = opt;
      best = miss;
    }
  }
  if (!found) return kRaNone;  // unreachable: at most one sense is excluded

  // Strength: the weak rate if it already clears the safety margin.
  switch (chosen.sense) {
    case Sense::level:
      return 3;
    case Sense::up:
      return std::fabs(projected_miss(obs, horizon, react, 25.0)) >= params.alim ? 4 : 5;
    case Sense::down:
      return std::fabs(projected_miss(obs, horizon, react, -25.0)) >= params.alim ? 2 : 1;
  }
  return kRaNone;
}

}  // namespace encounter
