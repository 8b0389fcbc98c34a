#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "encounter/sim.hpp"
#include "nfg/rng.hpp"

using namespace encounter;
using nfg::RngStream;

namespace {

constexpr double kPi = std::numbers::pi;

AircraftState cruising(double x, double y, double z, double heading, double speed,
                       double vertical_rate = 0) {
  AircraftState a;
  a.x = x;
  a.y = y;
  a.z = z;
  a.heading = heading;
  a.speed = speed;
  a.cmd_speed = speed;
  a.vertical_rate = vertical_rate;
  a.cmd_vertical_rate = vertical_rate;
  return a;
}

WorldState two_aircraft(const AircraftState& a, const AircraftState& b) {
  WorldState s;
  s.aircraft = {a, b};
  return s;
}

// Drives an encounter with caller-supplied maneuvers instead of sampled pilot
// decisions, recording the advisory stream per aircraft.
OutcomeRecord drive(EncounterSim& sim, RngStream& rng, const std::array<double, 2>& responses,
                    std::array<std::vector<int>, 2>* advisories = nullptr) {
  while (!sim.done()) {
    const auto pending = sim.observe(rng);
    if (advisories)
      for (int i = 0; i < 2; ++i) (*advisories)[i].push_back(sim.last_advisory(i));
    if (sim.done()) break;
    for (const PendingDecision& pd : pending) {
      PilotAction a;
      a.vertical_rate = responses[pd.pilot];
      sim.set_action(pd.pilot, a);
    }
    sim.advance(rng);
  }
  return sim.outcome();
}

bool same_outcome(const OutcomeRecord& a, const OutcomeRecord& b) {
  return a.seed == b.seed && a.d_min == b.d_min && a.nmac == b.nmac && a.F == b.F &&
         a.discarded == b.discarded && a.ra[0] == b.ra[0] && a.ra[1] == b.ra[1] &&
         a.t_ra[0] == b.t_ra[0] && a.t_ra[1] == b.t_ra[1] && a.decided[0] == b.decided[0] &&
         a.decided[1] == b.decided[1] &&
         a.action[0].vertical_rate == b.action[0].vertical_rate &&
         a.action[1].vertical_rate == b.action[1].vertical_rate &&
         a.action[0].heading_rate == b.action[0].heading_rate &&
         a.action[1].heading_rate == b.action[1].heading_rate && a.failed == b.failed;
}

bool same_trajectory(const std::vector<TrajectoryPoint>& a,
                     const std::vector<TrajectoryPoint>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].time != b[i].time || a[i].aircraft != b[i].aircraft || a[i].x != b[i].x ||
        a[i].y != b[i].y || a[i].z != b[i].z || a[i].heading != b[i].heading ||
        a[i].vertical_rate != b[i].vertical_rate || a[i].speed != b[i].speed ||
        a[i].ra != b[i].ra)
      return false;
  }
  return true;
}

}  // namespace

// --- Quiet traffic -----------------------------------------------------------------

TEST_CASE("distant parallel traffic never alerts and scores its separation") {
  EncounterConfig cfg;
  cfg.noise.tcas = 0;
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0, 400),
                                    cruising(0, 100000, 5000, 0, 400));
  EncounterSim sim(s, cfg);
  RngStream rng(1);
  const OutcomeRecord out = drive(sim, rng, {0, 0});
  CHECK_FALSE(out.nmac);
  CHECK_FALSE(out.discarded);
  CHECK_FALSE(out.decided[0]);
  CHECK_FALSE(out.decided[1]);
  CHECK(out.ra[0] == kRaNone);
  CHECK(out.t_ra[0] == -1);
  CHECK(out.d_min == doctest::Approx(100000.0));
  CHECK(out.F == out.d_min);
  // Constant range never reads as passage; the clock ran out instead.
  CHECK(sim.world().time == doctest::Approx(cfg.sim.max_duration));
}

// --- Forced collision ----------------------------------------------------------------

TEST_CASE("co-located co-velocity aircraft are a near mid-air collision with zero welfare") {
  EncounterConfig cfg;
  cfg.noise.tcas = 0;
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0, 400),
                                    cruising(0, 0, 5000, 0, 400));
  EncounterSim sim(s, cfg);
  RngStream rng(2);
  const OutcomeRecord out = drive(sim, rng, {0, 0});
  CHECK(out.nmac);
  CHECK(out.F == 0.0);
  CHECK(out.d_min == 0.0);
  CHECK_FALSE(out.failed);
}

// --- Advisory lifecycle ----------------------------------------------------------------

TEST_CASE("a decision latches five seconds before the command changes") {
  EncounterConfig cfg;
  cfg.noise.tcas = 0;
  // Head-on at 6000 ft, closing at 400 ft/s: both advisories fire at t = 0.
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0, 200),
                                    cruising(6000, 0, 5050, kPi, 200));
  EncounterSim sim(s, cfg);
  RngStream rng(3);

  auto pending = sim.observe(rng);
  REQUIRE(pending.size() == 2);
  CHECK(pending[0].pilot == 0);
  CHECK(pending[1].pilot == 1);
  CHECK(pending[0].advisory == 1);  // strong descend below, strong climb above
  CHECK(pending[1].advisory == 5);
  PilotAction dive;
  dive.vertical_rate = -42;
  PilotAction climb;
  climb.vertical_rate = 42;
  sim.set_action(0, dive);
  sim.set_action(1, climb);
  CHECK(sim.has_decided(0));

  while (!sim.done() && sim.world().time < 8.5) {
    sim.advance(rng);
    const double t = sim.world().time;
    const double cmd = sim.world().aircraft[0].cmd_vertical_rate;
    if (t <= 5.0) {
      CHECK(cmd == 0.0);  // still flying the old command during the delay
      CHECK(sim.world().aircraft[0].vertical_rate == 0.0);
    } else {
      CHECK(cmd == -42.0);
    }
    if (t == 6.0) {
      // First filtered step toward the new command.
      CHECK(sim.world().aircraft[0].vertical_rate == doctest::Approx(-14.0));
      CHECK(sim.world().aircraft[0].z == 5000.0);
    }
    if (sim.done()) break;
    const auto later = sim.observe(rng);
    CHECK(later.empty());  // at most one decision per pilot, ever
  }

  // Advisory intents are carried into the world after each step.
  CHECK(sim.world().intents[0].issued);
  CHECK(sim.world().intents[0].sense == Sense::down);
  CHECK(sim.world().intents[1].sense == Sense::up);
}

TEST_CASE("one step of the simulator is one kinematics step per aircraft") {
  EncounterConfig cfg;
  cfg.noise.tcas = 0;
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0.4, 350, 5),
                                    cruising(9000, 2000, 5300, -2.0, 420, -3));
  EncounterSim sim(s, cfg);
  RngStream rng(4);
  sim.observe(rng);
  const WorldState before = sim.world();
  sim.advance(rng);
  const WorldState after = sim.world();
  CHECK(after.time == before.time + cfg.sim.dt);
  for (int i = 0; i < 2; ++i) {
    const AircraftState expect = kinematics_step(before.aircraft[i], cfg.sim.dt, cfg.filter);
    CHECK(after.aircraft[i].x == expect.x);
    CHECK(after.aircraft[i].y == expect.y);
    CHECK(after.aircraft[i].z == expect.z);
    CHECK(after.aircraft[i].heading == expect.heading);
    CHECK(after.aircraft[i].heading_rate == expect.heading_rate);
    CHECK(after.aircraft[i].vertical_rate == expect.vertical_rate);
    CHECK(after.aircraft[i].speed == expect.speed);
  }
}

TEST_CASE("a strengthening advisory discards the encounter") {
  EncounterConfig cfg;
  cfg.noise.tcas = 0;
  // 8000 ft apart closing at 200 ft/s with a 200 ft vertical offset: the weak
  // descend issued at t = 0 strengthens once the time-to-go drops under 13 s.
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0, 100),
                                    cruising(8000, 0, 5200, kPi, 100));
  EncounterSim sim(s, cfg);
  RngStream rng(5);
  std::array<std::vector<int>, 2> seq;
  const OutcomeRecord out = drive(sim, rng, {0, 0}, &seq);
  CHECK(out.discarded);
  CHECK(out.ra[0] == 2);  // the first advisory stays on record
  CHECK(out.t_ra[0] == 0.0);
  CHECK(out.decided[0]);
  CHECK(sim.world().time == doctest::Approx(28.0));
  CHECK(seq[0].back() == 1);  // it was the switch to the strong descend that ended it
  // ...and the run never reached the closest approach at t = 40.
  CHECK(out.d_min > 2000.0);
}

TEST_CASE("an advisory that falls away to none does not discard the encounter") {
  EncounterConfig cfg;
  cfg.noise.tcas = 0;
  // Closing head-on with a 300 ft offset; both pilots escape hard at t = 5, so
  // the projected separation leaves the alerting band and the advisories end.
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0, 100),
                                    cruising(8000, 0, 5300, kPi, 100));
  EncounterSim sim(s, cfg);
  RngStream rng(6);
  std::array<std::vector<int>, 2> seq;
  const OutcomeRecord out = drive(sim, rng, {-50, 50}, &seq);
  CHECK_FALSE(out.discarded);
  CHECK_FALSE(out.nmac);
  CHECK(out.ra[0] == 2);
  CHECK(out.ra[1] == 4);
  CHECK(out.F == out.d_min);
  CHECK(out.d_min > 0.0);

  for (int i = 0; i < 2; ++i) {
    CHECK(seq[i].front() != kRaNone);
    CHECK(seq[i].back() == kRaNone);  // ended quiet
    for (int ra : seq[i]) {
      const bool expected = ra == kRaNone || ra == out.ra[i];
      CHECK(expected);  // never a different advisory, only the first or none
    }
  }
}

// --- Full encounters ---------------------------------------------------------------------

TEST_CASE("an encounter is bit-identical across repeated runs") {
  const EncounterConfig cfg;
  const EncounterResult a = run_encounter(cfg, 7, true);
  const EncounterResult b = run_encounter(cfg, 7, true);
  CHECK(same_outcome(a.outcome, b.outcome));
  CHECK(same_trajectory(a.trajectory, b.trajectory));
  CHECK(a.outcome.seed == 7);
  CHECK_FALSE(a.trajectory.empty());

  const EncounterResult c = run_encounter(cfg, 8, true);
  CHECK_FALSE(same_trajectory(a.trajectory, c.trajectory));  // seeds matter
}

TEST_CASE("trajectories carry the advisory in effect and a row per aircraft per step") {
  const EncounterConfig cfg;
  const EncounterResult res = run_encounter(cfg, 11, true);
  const OutcomeRecord& out = res.outcome;
  REQUIRE_FALSE(res.trajectory.empty());
  REQUIRE(res.trajectory.size() % 2 == 0);

  double prev_time = -1;
  for (size_t i = 0; i < res.trajectory.size(); i += 2) {
    const TrajectoryPoint& p0 = res.trajectory[i];
    const TrajectoryPoint& p1 = res.trajectory[i + 1];
    CHECK(p0.aircraft == 0);
    CHECK(p1.aircraft == 1);
    CHECK(p0.time == p1.time);
    CHECK(p0.time > prev_time);
    prev_time = p0.time;
    for (const TrajectoryPoint* p : {&p0, &p1}) {
      const int ac = p->aircraft;
      // Rows snapshot the state entering a step; an advisory displayed at
      // time t is first visible in the row at t + dt.
      const bool on_display = out.t_ra[ac] >= 0 && p->time > out.t_ra[ac];
      CHECK(p->ra == (on_display ? out.ra[ac] : kRaNone));
    }
  }
  CHECK(res.trajectory.front().time == 0.0);
}

TEST_CASE("welfare is zero exactly on a near mid-air collision") {
  const EncounterConfig cfg;
  for (uint64_t seed = 100; seed < 130; ++seed) {
    const OutcomeRecord out = run_encounter(cfg, seed).outcome;
    if (out.failed) continue;
    if (out.nmac)
      CHECK(out.F == 0.0);
    else
      CHECK(out.F == out.d_min);
    CHECK(out.d_min > 0.0);
  }
}

TEST_CASE("decision failures surface as failed outcomes, not exceptions") {
  EncounterConfig cfg;
  cfg.noise.pilot = 0;  // exact views make every imagined world inadmissible
  cfg.pilot.num_env_samples = 1;
  cfg.pilot.redraw_cap_factor = 10;
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0, 200),
                                    cruising(6000, 0, 5050, kPi, 200));
  EncounterSim sim(s, cfg);
  RngStream rng(9);
  const auto pending = sim.observe(rng);
  REQUIRE_FALSE(pending.empty());
  const OutcomeRecord out = complete_encounter(sim, pending, cfg, rng);
  CHECK(out.failed);
  CHECK_FALSE(out.failure.empty());
  CHECK(out.failure.find("acceptance rate") != std::string::npos);
}

// --- Heading-advisory search ----------------------------------------------------------

TEST_CASE("identical rollouts tie-break toward holding heading") {
  EncounterConfig cfg;
  cfg.noise.pilot = 0;
  cfg.noise.tcas = 0;
  cfg.sim.horizontal_mode = true;
  cfg.horizontal.rollouts = 5;
  // Diverging traffic with both maneuvers already committed: candidate turns
  // cannot change anything, so every score sheet row is identical.
  const WorldState s = two_aircraft(cruising(0, 0, 5000, kPi, 300),
                                    cruising(20000, 0, 5400, 0, 300));
  EncounterSim sim(s, cfg);
  PilotAction hold;
  sim.set_action(0, hold);
  sim.set_action(1, hold);

  std::vector<PendingDecision> pending(1);
  pending[0].pilot = 1;
  pending[0].advisory = 4;
  pending[0].tcas_frame = pack_tcas_observation(tcas_geometry(s, 1));

  std::vector<HeadingCandidateStat> stats;
  const double chosen = search_heading_advisory(sim, pending, 0, cfg, 77, &stats);
  CHECK(chosen == 0.0);
  REQUIRE(stats.size() == 5);
  CHECK(stats[0].rate == 0.0);
  for (const auto& row : stats) {
    CHECK(row.mean_F == stats[0].mean_F);
    CHECK(row.rollouts_used == cfg.horizontal.rollouts);
    CHECK(row.rollouts_failed == 0);
  }
  // The gentler turns are listed before the harder ones for the tie-break.
  CHECK(std::fabs(stats[1].rate) < std::fabs(stats[3].rate));
}

TEST_CASE("the chosen turn has the best score sheet and repeats deterministically") {
  EncounterConfig cfg;
  cfg.sim.horizontal_mode = true;
  cfg.horizontal.rollouts = 4;
  cfg.pilot.level = 1;
  cfg.pilot.num_candidates = 2;
  cfg.pilot.num_env_samples = 2;
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0, 200),
                                    cruising(8000, 0, 5500, kPi, 200));
  EncounterSim sim(s, cfg);
  RngStream rng(10);
  const auto pending = sim.observe(rng);
  REQUIRE_FALSE(pending.empty());

  std::vector<HeadingCandidateStat> stats;
  const double chosen = search_heading_advisory(sim, pending, 0, cfg, 123, &stats);
  REQUIRE(stats.size() == 5);
  double best = -1e300;
  for (const auto& row : stats) best = std::max(best, row.mean_F);
  const double maintain = stats[0].mean_F;
  bool chosen_is_best = false;
  for (const auto& row : stats)
    if (row.rate == chosen && row.mean_F == best) chosen_is_best = true;
  CHECK(chosen_is_best);
  CHECK(best >= maintain);

  std::vector<HeadingCandidateStat> again;
  CHECK(search_heading_advisory(sim, pending, 0, cfg, 123, &again) == chosen);
  REQUIRE(again.size() == stats.size());
  for (size_t i = 0; i < stats.size(); ++i) CHECK(again[i].mean_F == stats[i].mean_F);
}

TEST_CASE("a search whose rollouts mostly fail raises an error") {
  EncounterConfig cfg;
  cfg.noise.pilot = 0;  // decisions inside the rollouts cannot succeed
  cfg.noise.tcas = 0;
  cfg.sim.horizontal_mode = true;
  cfg.horizontal.rollouts = 3;
  cfg.pilot.num_env_samples = 1;
  cfg.pilot.redraw_cap_factor = 5;
  const WorldState s = two_aircraft(cruising(0, 0, 5000, 0, 200),
                                    cruising(6000, 0, 5050, kPi, 200));
  EncounterSim sim(s, cfg);
  RngStream rng(12);
  const auto pending = sim.observe(rng);
  REQUIRE_FALSE(pending.empty());
  CHECK_THROWS_AS(search_heading_advisory(sim, pending, 0, cfg, 5), nfg::NetError);
}

TEST_CASE("horizontal encounters replay bit-identically") {
  EncounterConfig cfg;
  cfg.sim.horizontal_mode = true;
  cfg.horizontal.rollouts = 3;
  cfg.pilot.level = 1;
  cfg.pilot.num_candidates = 2;
  cfg.pilot.num_env_samples = 2;
  const EncounterResult a = run_encounter(cfg, 21, true);
  const EncounterResult b = run_encounter(cfg, 21, true);
  CHECK(same_outcome(a.outcome, b.outcome));
  CHECK(same_trajectory(a.trajectory, b.trajectory));
}
