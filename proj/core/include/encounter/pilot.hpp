#pragma once

#include <array>

#include "encounter/config.hpp"
#include "encounter/tcas.hpp"
#include "encounter/world.hpp"
#include "nfg/strategy.hpp"

namespace encounter {

// --- Pilot observation ------------------------------------------------------
// A pilot sees both aircraft's kinematics (x, y, z, heading, heading_rate,
// vertical_rate, speed), aircraft 0 first. Commands and advisory intents are
// not observable. Heading rate carries zero noise: it is copied through, and
// the matching zero in the state proposal keeps the copied dimensions
// mutually consistent (a nonzero/zero mismatch would drive every importance
// weight to zero).
inline constexpr int kPilotObsDims = 14;
inline constexpr std::array<double, 7> kPilotNoiseSigma = {100, 100, 20, 0.05, 0, 5, 10};

Vec pilot_observe(const WorldState& s, double noise_scale, nfg::RngStream& rng);

// --- Per-dimension Gaussian products ----------------------------------------
// sigma[d] == 0 marks a copied dimension; it contributes an exact-match 0/1
// factor to the density instead of a Gaussian.
Vec gaussian_vec_sample(const Vec& mu, const Vec& sigma, nfg::RngStream& rng);
double gaussian_vec_density(const Vec& x, const Vec& mu, const Vec& sigma);

// --- Advisory intents as a small discrete space -----------------------------
// The four distinguishable intents: none, or issued with one of three senses.
// Used by the flat state prior (uniform mass 1/4 per aircraft) and by the
// intent block of the state proposal.
inline constexpr int kIntentOutcomes = 4;
int intent_outcome(const TcasIntent& t);       // 0 none, 1 + sense otherwise
TcasIntent intent_from_outcome(int outcome);

// --- Maneuver utility --------------------------------------------------------
// Reward for separation (log, kept finite by delta), penalties for deviating
// from the current own rate and for disobeying the advisory. The obedience
// term is dropped when no advisory is displayed.
double pilot_utility(const UtilityWeights& w, double min_separation, double own_vertical_rate,
                     double commanded_vertical_rate, int advisory);

// Weight that puts a full-strength turn on the cost scale of a full-strength
// climb: 42 (ft/s) over the hard turn rate (rad/s).
inline double turn_cost_scale(double hard_rate_rad) { return 42.0 / hard_rate_rad; }

// Horizontal-mode extension: heading-rate deviation and obedience, scaled by
// kappa = turn_cost_scale(...). An aircraft without an assigned turn is
// treated as advised to hold heading (advisory rate 0).
double pilot_utility_horizontal(const UtilityWeights& w, double kappa, double min_separation,
                                double own_vertical_rate, double commanded_vertical_rate,
                                int advisory, double own_heading_rate,
                                double commanded_heading_rate, double heading_advisory);

// Commanded vertical rates are drawn from and clipped to this band (ft/s).
inline constexpr double kVerticalRateLimit = 50;

// --- The decision problem ----------------------------------------------------
// Importance-proposal spreads about the simulator's current values. State:
// per-aircraft (x, y, z, heading, heading_rate, vertical_rate, speed), with
// commands and the decider's own intent copied. Sensor frame: the five
// observation components.
inline constexpr std::array<double, 7> kStateProposalSigma = {5, 5, 2, 0.01, 0, 1, 5};
inline constexpr std::array<double, kTcasObsDims> kTcasProposalSigma = {5, 2, 2, 2, 2};

// Everything a deciding pilot knows at the moment an advisory arrives.
struct DecisionInputs {
  int pilot = 0;
  int advisory = kRaNone;  // freshly displayed advisory index
  Vec observation;         // kPilotObsDims kinematic observation
  Vec tcas_frame;          // kTcasObsDims sensor values behind the advisory
  // Assigned heading-rate advisories (rad/s), horizontal mode only; an
  // unassigned aircraft keeps 0 ("maintain heading").
  std::array<double, 2> heading_advisory{0, 0};
};

// The ten-node decision net for one advisory response plus the strategy
// wiring and the proposals that stand in for the pilot's beliefs. Nodes:
// S (full state), Wi (pilot i's view), WTCASi (sensor frame i), Ti (advisory
// i), Ai (maneuver i), H (minimum separation of the imagined completion).
struct DecisionProblem {
  nfg::GameNet net;
  nfg::StrategyConfig strategy;
  nfg::ProposalOverride proposal;  // for S and the decider's sensor frame
  nfg::Instantiation observed;     // the decider's observation and advisory
  nfg::NodeId decision;            // "A0" or "A1"
};

DecisionProblem build_decision_problem(const WorldState& s, const DecisionInputs& in,
                                       const EncounterConfig& cfg);

struct PilotAction {
  double vertical_rate = 0;
  bool has_heading_rate = false;
  double heading_rate = 0;  // rad/s
};

// Builds the decision problem and runs the likelihood-weighted level-k
// process for the deciding pilot's node.
PilotAction pilot_decide(const WorldState& s, const DecisionInputs& in,
                         const EncounterConfig& cfg, nfg::RngStream& rng,
                         nfg::StrategyStats* stats = nullptr);

}  // namespace encounter
