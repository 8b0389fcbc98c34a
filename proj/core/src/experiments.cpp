#include "encounter/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "nfg/stats.hpp"

namespace encounter {

BatchResult run_batch(const EncounterConfig& cfg, int encounters, uint64_t seed, int workers) {
  if (encounters <= 0) throw nfg::NetError("encounter count must be positive");
  workers = std::clamp(workers, 1, encounters);

  BatchResult res;
  res.outcomes.resize(static_cast<size_t>(encounters));
  std::atomic<int> next{0};
  auto work = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= encounters) return;
      const uint64_t s = nfg::derive_seed(seed, static_cast<uint64_t>(i));
      try {
        res.outcomes[static_cast<size_t>(i)] = run_encounter(cfg, s).outcome;
      } catch (const std::exception& e) {
        OutcomeRecord r;
        r.seed = s;
        r.failed = true;
        r.failure = e.what();
        res.outcomes[static_cast<size_t>(i)] = r;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<double> F, dmin, nm;
  for (const OutcomeRecord& r : res.outcomes) {
    if (r.failed) {
      ++res.failed;
      continue;
    }
    if (r.discarded) {
      ++res.discarded;
      continue;
    }
    ++res.valid;
    F.push_back(r.F);
    dmin.push_back(r.d_min);
    nm.push_back(r.nmac ? 1.0 : 0.0);
  }
  if (res.valid == 0)
    throw nfg::NetError("no usable encounters in batch: " + std::to_string(res.failed) +
                        " failed, " + std::to_string(res.discarded) + " discarded of " +
                        std::to_string(encounters));
  res.mean_F = nfg::mean(F);
  res.mean_d_min = nfg::mean(dmin);
  res.nmac_rate = nfg::mean(nm);
  res.F_ci = nfg::bootstrap_mean_ci(F, 0.95, 2000, nfg::derive_seed(seed, 0xF00, 1));
  res.nmac_ci = nfg::bootstrap_mean_ci(nm, 0.95, 2000, nfg::derive_seed(seed, 0xF00, 2));
  return res;
}

SweepResult run_sweep(const EncounterConfig& base, const SweepSpec& spec, int encounters,
                      uint64_t seed, int workers) {
  if (spec.values.empty()) throw nfg::NetError("sweep needs at least one value");
  SweepResult res;
  res.spec = spec;
  for (size_t p = 0; p < spec.values.size(); ++p) {
    EncounterConfig cfg = base;
    set_config_value(cfg, spec.key, spec.values[p]);
    SweepCell cell;
    cell.value = spec.values[p];
    cell.batch = run_batch(cfg, encounters, nfg::derive_seed(seed, p), workers);
    res.cells.push_back(std::move(cell));
  }
  return res;
}

HorizontalComparison run_horizontal_comparison(const EncounterConfig& cfg, int encounters,
                                               uint64_t seed, int workers) {
  HorizontalComparison cmp;
  EncounterConfig on = cfg;
  on.sim.horizontal_mode = true;
  EncounterConfig off = cfg;
  off.sim.horizontal_mode = false;
  cmp.with_search = run_batch(on, encounters, seed, workers);
  cmp.baseline = run_batch(off, encounters, seed, workers);
  return cmp;
}

int resolve_workers(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("MIDAIR_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace encounter
