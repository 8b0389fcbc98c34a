#include "encounter/sim.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace encounter {

using nfg::RngStream;

WorldState generate_encounter(const GeneratorRanges& g, RngStream& rng) {
  constexpr double kTau = 2 * std::numbers::pi;
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    WorldState s;
    const double theta1 = rng.uniform(0, kTau);
    const double theta2 = theta1 + rng.uniform(g.angle_min_deg, g.angle_max_deg) * kDegToRad;
    const double headings[2] = {theta1, theta2};
    double vx[2], vy[2];
    for (int i = 0; i < 2; ++i) {
      AircraftState& a = s.aircraft[i];
      a.heading = headings[i];
      a.speed = rng.uniform(g.speed_min, g.speed_max);
      a.vertical_rate = rng.uniform(g.vertical_rate_min, g.vertical_rate_max);
      a.cmd_vertical_rate = a.vertical_rate;
      a.cmd_speed = a.speed;
      vx[i] = a.speed * std::cos(a.heading);
      vy[i] = a.speed * std::sin(a.heading);
    }
    const double dvx = vx[1] - vx[0], dvy = vy[1] - vy[0];
    const double closing = std::hypot(dvx, dvy);
    if (closing < g.min_closing_speed) continue;

    const double t = rng.uniform(g.t_target_min, g.t_target_max);
    const double miss = rng.uniform(0, g.horizontal_miss_max);
    const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
    // Unit normal to the relative velocity: a straight-line pass comes within
    // exactly `miss` of the other aircraft, at time `t`.
    const double nx = side * -dvy / closing, ny = side * dvx / closing;
    s.aircraft[0].x = -vx[0] * t;
    s.aircraft[0].y = -vy[0] * t;
    s.aircraft[1].x = miss * nx - vx[1] * t;
    s.aircraft[1].y = miss * ny - vy[1] * t;

    s.aircraft[0].z = rng.uniform(g.altitude_min, g.altitude_max);
    const double dz_at_t = rng.uniform(-g.vertical_miss_max, g.vertical_miss_max);
    s.aircraft[1].z = s.aircraft[0].z + dz_at_t +
                      (s.aircraft[0].vertical_rate - s.aircraft[1].vertical_rate) * t;
    return s;
  }
  throw nfg::NetError(
      "encounter generation stalled: closing speeds kept falling below the minimum");
}

bool detect_nmac(const WorldState& s, const SimSettings& sim) {
  return horizontal_separation(s) < sim.nmac_horizontal &&
         vertical_separation(s) < sim.nmac_vertical;
}

EncounterSim::EncounterSim(const WorldState& start, const EncounterConfig& cfg)
    : cfg_(cfg), s_(start) {
  min_sep_ = slant_separation(s_);
  nmac_ = detect_nmac(s_, cfg_.sim);
  passage_.update(horizontal_separation(s_), horizontal_range_rate(s_));
}

std::vector<PendingDecision> EncounterSim::observe(RngStream& rng) {
  std::vector<PendingDecision> pending;
  if (done_) return pending;
  for (int i = 0; i < 2; ++i) {
    const TcasObservation obs = tcas_observe(s_, i, cfg_.noise.tcas, rng);
    const int adv = mini_tcas(obs, s_.intents[i], s_.intents[1 - i], cfg_.tcas);
    last_advisory_[i] = adv;
    if (adv == kRaNone) continue;
    if (!had_ra_[i]) {
      had_ra_[i] = true;
      first_ra_[i] = adv;
      first_ra_time_[i] = s_.time;
      pending.push_back({i, adv, pack_tcas_observation(obs)});
    } else if (adv != first_ra_[i]) {
      // Advisory strengthened or reversed: outside the one-decision model, so
      // the whole run is discarded.
      discarded_ = true;
      done_ = true;
      pending.clear();
      return pending;
    }
  }
  return pending;
}

DecisionInputs EncounterSim::decision_context(const PendingDecision& pd, RngStream& rng) const {
  DecisionInputs in;
  in.pilot = pd.pilot;
  in.advisory = pd.advisory;
  in.observation = pilot_observe(s_, cfg_.noise.pilot, rng);
  in.tcas_frame = pd.tcas_frame;
  in.heading_advisory = heading_adv_;
  return in;
}

void EncounterSim::set_heading_advisory(int pilot, double rate) { heading_adv_[pilot] = rate; }

void EncounterSim::set_action(int pilot, const PilotAction& a) {
  plans_[pilot].active = true;
  plans_[pilot].start_time = s_.time + cfg_.sim.reaction_delay;
  plans_[pilot].vertical_rate = a.vertical_rate;
  plans_[pilot].has_heading_rate = a.has_heading_rate;
  plans_[pilot].heading_rate = a.heading_rate;
  decided_[pilot] = true;
  actions_[pilot] = a;
}

void EncounterSim::advance(RngStream&) {
  if (done_) return;
  for (int i = 0; i < 2; ++i) apply_due_maneuver(s_.aircraft[i], plans_[i], s_.time);
  for (int i = 0; i < 2; ++i)
    s_.aircraft[i] = kinematics_step(s_.aircraft[i], cfg_.sim.dt, cfg_.filter);
  s_.time += cfg_.sim.dt;
  ++steps_;
  // Advisories displayed this step become announced intents for the next one.
  for (int i = 0; i < 2; ++i)
    if (last_advisory_[i] != kRaNone) s_.intents[i] = TcasIntent{true, ra_sense(last_advisory_[i])};

  min_sep_ = std::min(min_sep_, slant_separation(s_));
  nmac_ = nmac_ || detect_nmac(s_, cfg_.sim);
  if (passage_.update(horizontal_separation(s_), horizontal_range_rate(s_))) done_ = true;
  if (s_.time >= cfg_.sim.max_duration - 1e-9) done_ = true;
}

OutcomeRecord EncounterSim::outcome() const {
  OutcomeRecord r;
  r.d_min = min_sep_;
  r.nmac = nmac_;
  r.F = nmac_ ? 0 : min_sep_;
  r.discarded = discarded_;
  for (int i = 0; i < 2; ++i) {
    r.ra[i] = first_ra_[i];
    r.t_ra[i] = first_ra_time_[i];
    r.decided[i] = decided_[i];
    r.action[i] = actions_[i];
  }
  return r;
}

OutcomeRecord complete_encounter(EncounterSim sim, std::vector<PendingDecision> pending,
                                 const EncounterConfig& cfg, RngStream& rng) {
  while (!sim.done()) {
    for (const PendingDecision& pd : pending) {
      if (sim.has_decided(pd.pilot)) continue;  // one decision per pilot, ever
      const DecisionInputs in = sim.decision_context(pd, rng);
      try {
        sim.set_action(pd.pilot, pilot_decide(sim.world(), in, cfg, rng));
      } catch (const nfg::SamplingError& e) {
        OutcomeRecord r = sim.outcome();
        r.failed = true;
        r.failure = e.what();
        return r;
      }
    }
    sim.advance(rng);
    if (sim.done()) break;
    pending = sim.observe(rng);
  }
  return sim.outcome();
}

namespace {

std::vector<double> heading_candidates(const HorizontalSettings& h) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  const double mod = h.moderate_rate_deg * kDegToRad;
  const double hard = h.hard_rate_deg * kDegToRad;
  return {0.0, mod, -mod, hard, -hard};
}

}  // namespace

double search_heading_advisory(const EncounterSim& sim,
                               const std::vector<PendingDecision>& pending, size_t which,
                               const EncounterConfig& cfg, uint64_t seed,
                               std::vector<HeadingCandidateStat>* stats) {
  const std::vector<double> candidates = heading_candidates(cfg.horizontal);
  double best = -std::numeric_limits<double>::infinity();
  double chosen = candidates.front();
  int failed_total = 0;
  if (stats) stats->clear();
  for (size_t c = 0; c < candidates.size(); ++c) {
    double sum = 0;
    int counted = 0;
    int failed = 0;
    for (int k = 0; k < cfg.horizontal.rollouts; ++k) {
      EncounterSim fork = sim;
      fork.set_heading_advisory(pending[which].pilot, candidates[c]);
      RngStream rng(nfg::derive_seed(seed, static_cast<uint64_t>(sim.step_count()), c,
                                     static_cast<uint64_t>(k)));
      const OutcomeRecord r = complete_encounter(std::move(fork), pending, cfg, rng);
      if (r.failed) {
        ++failed;
        continue;
      }
      if (r.discarded) continue;
      sum += r.F;
      ++counted;
    }
    failed_total += failed;
    const double score =
        counted > 0 ? sum / counted : -std::numeric_limits<double>::infinity();
    if (stats) stats->push_back({candidates[c], score, counted, failed});
    if (score > best) {
      best = score;
      chosen = candidates[c];
    }
  }
  const int total = static_cast<int>(candidates.size()) * cfg.horizontal.rollouts;
  if (failed_total * 2 > total)
    throw nfg::NetError("heading advisory search: " + std::to_string(failed_total) + " of " +
                        std::to_string(total) + " rollouts failed");
  return chosen;
}

namespace {

// Heading advisories are assigned when first advisories appear: whoever is
// first holds heading; a pilot whose counterpart already has an advisory gets
// the searched turn. When both first advisories land on the same step,
// aircraft 0 plays the "first" role.
void assign_heading_advisories(EncounterSim& sim, const std::vector<PendingDecision>& pending,
                               const EncounterConfig& cfg, uint64_t seed) {
  for (size_t p = 0; p < pending.size(); ++p) {
    const int pilot = pending[p].pilot;
    const bool other_has_one = sim.had_advisory(1 - pilot);
    const bool other_later_in_batch =
        p + 1 < pending.size() && pending[p + 1].pilot == 1 - pilot;
    if (other_has_one && !other_later_in_batch)
      sim.set_heading_advisory(pilot, search_heading_advisory(sim, pending, p, cfg, seed));
    else
      sim.set_heading_advisory(pilot, 0.0);
  }
}

void record_trajectory(std::vector<TrajectoryPoint>& out, const EncounterSim& sim) {
  const WorldState& s = sim.world();
  for (int i = 0; i < 2; ++i) {
    TrajectoryPoint p;
    p.time = s.time;
    p.aircraft = i;
    p.x = s.aircraft[i].x;
    p.y = s.aircraft[i].y;
    p.z = s.aircraft[i].z;
    p.heading = s.aircraft[i].heading;
    p.vertical_rate = s.aircraft[i].vertical_rate;
    p.speed = s.aircraft[i].speed;
    p.ra = sim.advisory_in_effect(i);
    out.push_back(p);
  }
}

}  // namespace

EncounterResult run_encounter(const EncounterConfig& cfg, uint64_t seed, bool want_trajectory) {
  RngStream rng(seed);
  EncounterResult res;
  EncounterSim sim(generate_encounter(cfg.gen, rng), cfg);
  if (want_trajectory) record_trajectory(res.trajectory, sim);

  while (!sim.done()) {
    const std::vector<PendingDecision> pending = sim.observe(rng);
    if (sim.done()) break;
    if (!pending.empty()) {
      if (cfg.sim.horizontal_mode) assign_heading_advisories(sim, pending, cfg, seed);
      for (const PendingDecision& pd : pending) {
        const DecisionInputs in = sim.decision_context(pd, rng);
        try {
          sim.set_action(pd.pilot, pilot_decide(sim.world(), in, cfg, rng));
        } catch (const nfg::SamplingError& e) {
          res.outcome = sim.outcome();
          res.outcome.seed = seed;
          res.outcome.failed = true;
          res.outcome.failure = e.what();
          return res;
        }
      }
    }
    sim.advance(rng);
    if (want_trajectory) record_trajectory(res.trajectory, sim);
  }
  res.outcome = sim.outcome();
  res.outcome.seed = seed;
  return res;
}

}  // namespace encounter
