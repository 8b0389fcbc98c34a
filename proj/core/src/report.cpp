#include "encounter/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace encounter {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.8g", v);
  return buf;
}

}  // namespace

void write_outcomes_csv(std::ostream& out, const std::vector<OutcomeRecord>& outcomes) {
  out << "seed,d_min,nmac,F,discarded,ra1,ra2,action1,action2,t_ra1,t_ra2\n";
  for (const OutcomeRecord& r : outcomes) {
    out << r.seed << ',' << num(r.d_min) << ',' << (r.nmac ? 1 : 0) << ',' << num(r.F) << ','
        << (r.discarded ? 1 : 0);
    for (int i = 0; i < 2; ++i) out << ',' << ra_name(r.ra[i]);
    for (int i = 0; i < 2; ++i) {
      out << ',';
      if (r.decided[i]) out << num(r.action[i].vertical_rate);
    }
    for (int i = 0; i < 2; ++i) {
      out << ',';
      if (r.t_ra[i] >= 0) out << num(r.t_ra[i]);
    }
    out << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& rows) {
  out << "time,aircraft,x,y,z,theta,z_dot,f,ra\n";
  for (const TrajectoryPoint& p : rows) {
    out << num(p.time) << ',' << p.aircraft << ',' << num(p.x) << ',' << num(p.y) << ','
        << num(p.z) << ',' << num(p.heading) << ',' << num(p.vertical_rate) << ','
        << num(p.speed) << ',' << ra_name(p.ra) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "key,value,encounters,valid,failed,discarded,mean_F,F_lo,F_hi,"
         "nmac_rate,nmac_lo,nmac_hi,mean_d_min\n";
  for (const SweepCell& c : sweep.cells) {
    const BatchResult& b = c.batch;
    out << sweep.spec.key << ',' << c.value << ',' << b.outcomes.size() << ',' << b.valid << ','
        << b.failed << ',' << b.discarded << ',' << num(b.mean_F) << ',' << num(b.F_ci.first)
        << ',' << num(b.F_ci.second) << ',' << num(b.nmac_rate) << ',' << num(b.nmac_ci.first)
        << ',' << num(b.nmac_ci.second) << ',' << num(b.mean_d_min) << '\n';
  }
}

void write_manifest(std::ostream& out, const EncounterConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& metadata) {
  for (const auto& [key, value] : metadata) out << key << " = " << value << '\n';
  out << '\n';
  for (const auto& [key, value] : config_key_values(cfg)) out << key << " = " << value << '\n';
}

std::string histogram_table(const std::vector<double>& values, int bins) {
  if (values.empty() || bins <= 0) return "(no data)\n";
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) hi = lo + 1;  // degenerate: everything lands in bin 0
  const double width = (hi - lo) / bins;

  std::vector<int> counts(static_cast<size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++counts[static_cast<size_t>(b)];
  }
  const int peak = *std::max_element(counts.begin(), counts.end());
  constexpr int kBarWidth = 40;

  std::ostringstream out;
  char line[160];
  for (int b = 0; b < bins; ++b) {
    const double a = lo + b * width;
    const double z = b + 1 == bins ? hi : a + width;
    const int bar = peak > 0 ? counts[static_cast<size_t>(b)] * kBarWidth / peak : 0;
    std::snprintf(line, sizeof(line), "[%12.2f, %12.2f%c %-*s %d\n", a, z,
                  b + 1 == bins ? ']' : ')', kBarWidth,
                  std::string(static_cast<size_t>(bar), '#').c_str(),
                  counts[static_cast<size_t>(b)]);
    out << line;
  }
  return out.str();
}

std::string batch_summary(const BatchResult& b) {
  std::ostringstream out;
  out << "encounters = " << b.outcomes.size() << " (valid " << b.valid << ", failed " << b.failed
      << ", discarded " << b.discarded << ")\n";
  out << "mean F = " << num(b.mean_F) << "  [" << num(b.F_ci.first) << ", "
      << num(b.F_ci.second) << "] 95% CI\n";
  out << "mean d_min = " << num(b.mean_d_min) << '\n';
  out << "nmac rate = " << num(b.nmac_rate) << "  [" << num(b.nmac_ci.first) << ", "
      << num(b.nmac_ci.second) << "] 95% CI\n";
  return out.str();
}

}  // namespace encounter
