// Microbenchmarks for the hot paths: kinematics, advisory logic, rollouts,
// single pilot decisions, and whole encounters.
#include <benchmark/benchmark.h>

#include "encounter/config.hpp"
#include "encounter/pilot.hpp"
#include "encounter/sim.hpp"
#include "encounter/tcas.hpp"
#include "encounter/world.hpp"
#include "nfg/rng.hpp"

namespace {

using namespace encounter;

WorldState converging_pair() {
  WorldState w;
  w.aircraft[0].z = 5000;
  w.aircraft[0].speed = 200;
  w.aircraft[0].cmd_speed = 200;
  w.aircraft[1].x = 9000;
  w.aircraft[1].z = 5200;
  w.aircraft[1].heading = 3.14159265358979;
  w.aircraft[1].speed = 200;
  w.aircraft[1].cmd_speed = 200;
  return w;
}

void bm_kinematics_step(benchmark::State& state) {
  AircraftState a = converging_pair().aircraft[0];
  a.cmd_vertical_rate = -42;
  const FilterTaus taus;
  for (auto _ : state) {
    a = kinematics_step(a, 1.0, taus);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(bm_kinematics_step);

void bm_mini_tcas(benchmark::State& state) {
  const WorldState w = converging_pair();
  const TcasObservation obs = tcas_geometry(w, 0);
  const TcasParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mini_tcas(obs, TcasIntent{}, TcasIntent{}, params));
  }
}
BENCHMARK(bm_mini_tcas);

void bm_rollout_min_separation(benchmark::State& state) {
  const WorldState w = converging_pair();
  std::array<ManeuverPlan, 2> plans;
  plans[0] = {true, 5.0, -42.0, false, 0.0};
  plans[1] = {true, 5.0, 42.0, false, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rollout_min_separation(w, plans, 1.0, 120.0, FilterTaus{}));
  }
}
BENCHMARK(bm_rollout_min_separation);

void bm_pilot_decide(benchmark::State& state) {
  const EncounterConfig cfg;
  const WorldState w = converging_pair();
  nfg::RngStream rng(7);
  DecisionInputs in;
  in.pilot = 0;
  const TcasObservation frame = tcas_geometry(w, 0);
  in.advisory = mini_tcas(frame, TcasIntent{}, TcasIntent{}, cfg.tcas);
  in.tcas_frame = pack_tcas_observation(frame);
  in.observation = pilot_observe(w, cfg.noise.pilot, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pilot_decide(w, in, cfg, rng));
  }
}
BENCHMARK(bm_pilot_decide);

void bm_run_encounter_default(benchmark::State& state) {
  const EncounterConfig cfg;
  uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_encounter(cfg, seed++));
  }
}
BENCHMARK(bm_run_encounter_default)->Unit(benchmark::kMillisecond);

void bm_run_encounter_level1(benchmark::State& state) {
  EncounterConfig cfg;
  cfg.pilot.level = 1;
  cfg.pilot.num_candidates = 2;
  cfg.pilot.num_env_samples = 2;
  uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_encounter(cfg, seed++));
  }
}
BENCHMARK(bm_run_encounter_level1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
