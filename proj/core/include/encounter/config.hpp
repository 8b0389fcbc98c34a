#pragma once

#include <map>
#include <string>

#include "encounter/tcas.hpp"
#include "encounter/world.hpp"

namespace encounter {

// Weights of the pilot's utility: value of separation, cost of deviating from
// the current vertical rate, cost of disobeying the advisory.
struct UtilityWeights {
  double alpha1 = 5.0;
  double alpha2 = 0.2;
  double alpha3 = 0.1;
  double delta = 1.0;  // ft, keeps the log term finite at zero separation
};

// How a pilot reasons when an advisory arrives.
struct PilotSettings {
  int level = 2;             // depth of opponent modeling
  int num_candidates = 5;    // maneuvers drawn for evaluation
  int num_env_samples = 10;  // imagined worlds per evaluation
  double level0_sigma = 20;  // spread of the non-strategic response about the advisory
  double intent_stay_prob = 0.8;  // proposal mass on the currently-believed intruder intent
  int redraw_cap_factor = 100;    // imagined-world attempt budget, per sample
};

struct NoiseScales {
  double pilot = 1.0;  // multiplies pilot-observation noise
  double tcas = 1.0;   // multiplies sensor noise feeding the advisory logic
};

// Geometry ranges for random encounter initialization. Angles in degrees.
struct GeneratorRanges {
  double t_target_min = 40, t_target_max = 60;       // s until closest approach
  double speed_min = 300, speed_max = 500;           // ft/s
  double altitude_min = 4000, altitude_max = 6000;   // ft
  double vertical_rate_min = -8, vertical_rate_max = 8;
  double angle_min_deg = 60, angle_max_deg = 300;    // heading difference
  double horizontal_miss_max = 500;                  // ft at closest approach
  double vertical_miss_max = 100;                    // ft at closest approach (+/-)
  double min_closing_speed = 50;                     // ft/s; resample below this
};

struct SimSettings {
  double dt = 1.0;
  double max_duration = 120;
  double reaction_delay = 5;     // s between an advisory and the command change
  double nmac_horizontal = 500;  // ft, strict
  double nmac_vertical = 100;    // ft, strict
  bool horizontal_mode = false;
};

// Heading-rate advisories used in horizontal mode (degrees per second).
struct HorizontalSettings {
  double hard_rate_deg = 3.0;
  double moderate_rate_deg = 1.5;
  int rollouts = 50;  // counterfactual completions per candidate
};

struct EncounterConfig {
  SimSettings sim;
  GeneratorRanges gen;
  NoiseScales noise;
  TcasParams tcas;
  PilotSettings pilot;
  UtilityWeights utility;
  FilterTaus filter;
  HorizontalSettings horizontal;
};

// Raised on malformed configuration input (file, key, or value).
struct ConfigError : nfg::NetError {
  using nfg::NetError::NetError;
};

// Flat "section.key = value" text, '#' comments, blank lines ignored. Every
// key has a default; parsing applies overrides on top of the defaults.
EncounterConfig parse_config(const std::string& text);
EncounterConfig load_config(const std::string& path);

// Set one parameter by its config key (used by sweeps). Accepts every key
// from config_key_values plus the aliases noise.M_w, noise.M_WTCAS,
// tcas.DMOD, tcas.ZTHR, strategy.M, strategy.M_prime.
void set_config_value(EncounterConfig& cfg, const std::string& key, const std::string& value);

// The fully resolved configuration as ordered key/value pairs, for manifests
// and echo-back.
std::vector<std::pair<std::string, std::string>> config_key_values(const EncounterConfig& cfg);

}  // namespace encounter
