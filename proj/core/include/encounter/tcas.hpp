#pragma once

#include "encounter/world.hpp"
#include "nfg/rng.hpp"

namespace encounter {

// Resolution advisories are target vertical rates. Index <-> value mapping is
// fixed; index 0 means "no advisory".
inline constexpr int kRaCount = 6;
inline constexpr int kRaNone = 0;
inline constexpr std::array<double, kRaCount> kRaRates{0.0, -42.0, -25.0, 0.0, 25.0, 42.0};

inline double ra_rate(int ra_index) { return kRaRates[static_cast<size_t>(ra_index)]; }

inline Sense ra_sense(int ra_index) {
  if (ra_index == 3) return Sense::level;
  return ra_rate(ra_index) > 0 ? Sense::up : Sense::down;
}

const char* ra_name(int ra_index);      // "none", "-42", ... "+42"
int ra_index_from_name(const std::string& name);

// Thresholds of the advisory rule. Distances in ft, times in s.
struct TcasParams {
  double dmod = 3500;         // range threshold
  double zthr = 600;          // altitude threshold
  double tau = 40;            // time-to-go threshold and projection horizon
  double alim = 400;          // required vertical miss distance
  double pilot_delay = 5;     // assumed response delay when projecting
};

// What the collision-avoidance unit measures about the intruder.
struct TcasObservation {
  double range = 0;           // horizontal, >= 0 after noise clamping
  double range_rate = 0;      // d(range)/dt, negative when converging
  double closure_rate = 0;    // intruder vertical rate minus own (h_dot)
  double altitude_offset = 0; // intruder altitude minus own (h)
  double own_altitude = 0;    // h_i
  bool coincident = false;    // aircraft horizontally coincident; range_rate forced to 0
};

inline constexpr int kTcasObsDims = 5;
Vec pack_tcas_observation(const TcasObservation& o);
TcasObservation unpack_tcas_observation(const Vec& v);

// Per-component measurement noise, scaled by a single knob.
inline constexpr std::array<double, kTcasObsDims> kTcasNoiseSigma{100, 50, 4, 10, 10};

// Exact geometry from `own`'s point of view, no noise.
TcasObservation tcas_geometry(const WorldState& s, int own);

// tcas_geometry plus independent Gaussian noise with
// kTcasNoiseSigma * noise_scale per component. Range is clamped at 0.
TcasObservation tcas_observe(const WorldState& s, int own, double noise_scale,
                             nfg::RngStream& rng);

// The advisory rule: detection (range, altitude, and projected-separation
// tests), sense selection by maximized projected vertical miss distance with
// the intruder's announced sense excluded, then the weakest strength that
// still achieves `alim`. Deterministic.
int mini_tcas(const TcasObservation& obs, const TcasIntent& own_intent,
              const TcasIntent& intruder_intent, const TcasParams& params);

}  // namespace encounter
