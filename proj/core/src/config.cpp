#include "encounter/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace encounter {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + text + "'");
  }
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": '" + text + "'");
  }
}

struct KeyEntry {
  std::string key;
  std::function<std::string(const EncounterConfig&)> get;
  std::function<void(EncounterConfig&, const std::string&)> set;
};

std::vector<KeyEntry> key_table() {
  auto dbl = [](const char* key, auto member) {
    return KeyEntry{
        key,
        [member](const EncounterConfig& c) { return format_double(std::invoke(member, c)); },
        [key, member](EncounterConfig& c, const std::string& v) {
          std::invoke(member, c) = parse_double(key, v);
        }};
  };
  auto integer = [](const char* key, auto member) {
    return KeyEntry{
        key,
        [member](const EncounterConfig& c) { return std::to_string(std::invoke(member, c)); },
        [key, member](EncounterConfig& c, const std::string& v) {
          std::invoke(member, c) = parse_int(key, v);
        }};
  };

  std::vector<KeyEntry> t;
  t.push_back(dbl("sim.dt", [](auto& c) -> auto& { return c.sim.dt; }));
  t.push_back(dbl("sim.max_duration", [](auto& c) -> auto& { return c.sim.max_duration; }));
  t.push_back(dbl("sim.reaction_delay", [](auto& c) -> auto& { return c.sim.reaction_delay; }));
  t.push_back(dbl("sim.nmac_horizontal", [](auto& c) -> auto& { return c.sim.nmac_horizontal; }));
  t.push_back(dbl("sim.nmac_vertical", [](auto& c) -> auto& { return c.sim.nmac_vertical; }));
  t.push_back(KeyEntry{
      "sim.mode",
      [](const EncounterConfig& c) {
        return std::string(c.sim.horizontal_mode ? "horizontal" : "vertical");
      },
      [](EncounterConfig& c, const std::string& v) {
        if (v == "vertical")
          c.sim.horizontal_mode = false;
        else if (v == "horizontal")
          c.sim.horizontal_mode = true;
        else
          throw ConfigError("sim.mode must be 'vertical' or 'horizontal', got '" + v + "'");
      }});

  t.push_back(dbl("gen.t_target_min", [](auto& c) -> auto& { return c.gen.t_target_min; }));
  t.push_back(dbl("gen.t_target_max", [](auto& c) -> auto& { return c.gen.t_target_max; }));
  t.push_back(dbl("gen.speed_min", [](auto& c) -> auto& { return c.gen.speed_min; }));
  t.push_back(dbl("gen.speed_max", [](auto& c) -> auto& { return c.gen.speed_max; }));
  t.push_back(dbl("gen.altitude_min", [](auto& c) -> auto& { return c.gen.altitude_min; }));
  t.push_back(dbl("gen.altitude_max", [](auto& c) -> auto& { return c.gen.altitude_max; }));
  t.push_back(
      dbl("gen.vertical_rate_min", [](auto& c) -> auto& { return c.gen.vertical_rate_min; }));
  t.push_back(
      dbl("gen.vertical_rate_max", [](auto& c) -> auto& { return c.gen.vertical_rate_max; }));
  t.push_back(dbl("gen.angle_min_deg", [](auto& c) -> auto& { return c.gen.angle_min_deg; }));
  t.push_back(dbl("gen.angle_max_deg", [](auto& c) -> auto& { return c.gen.angle_max_deg; }));
  t.push_back(
      dbl("gen.horizontal_miss_max", [](auto& c) -> auto& { return c.gen.horizontal_miss_max; }));
  t.push_back(
      dbl("gen.vertical_miss_max", [](auto& c) -> auto& { return c.gen.vertical_miss_max; }));
  t.push_back(
      dbl("gen.min_closing_speed", [](auto& c) -> auto& { return c.gen.min_closing_speed; }));

  t.push_back(dbl("noise.pilot_scale", [](auto& c) -> auto& { return c.noise.pilot; }));
  t.push_back(dbl("noise.tcas_scale", [](auto& c) -> auto& { return c.noise.tcas; }));

  t.push_back(dbl("tcas.dmod", [](auto& c) -> auto& { return c.tcas.dmod; }));
  t.push_back(dbl("tcas.zthr", [](auto& c) -> auto& { return c.tcas.zthr; }));
  t.push_back(dbl("tcas.tau", [](auto& c) -> auto& { return c.tcas.tau; }));
  t.push_back(dbl("tcas.alim", [](auto& c) -> auto& { return c.tcas.alim; }));
  t.push_back(dbl("tcas.pilot_delay", [](auto& c) -> auto& { return c.tcas.pilot_delay; }));

  t.push_back(integer("strategy.level", [](auto& c) -> auto& { return c.pilot.level; }));
  t.push_back(
      integer("strategy.num_candidates", [](auto& c) -> auto& { return c.pilot.num_candidates; }));
  t.push_back(integer("strategy.num_env_samples",
                      [](auto& c) -> auto& { return c.pilot.num_env_samples; }));
  t.push_back(dbl("strategy.level0_sigma", [](auto& c) -> auto& { return c.pilot.level0_sigma; }));
  t.push_back(
      dbl("strategy.intent_stay_prob", [](auto& c) -> auto& { return c.pilot.intent_stay_prob; }));
  t.push_back(integer("strategy.redraw_cap_factor",
                      [](auto& c) -> auto& { return c.pilot.redraw_cap_factor; }));

  t.push_back(dbl("utility.alpha1", [](auto& c) -> auto& { return c.utility.alpha1; }));
  t.push_back(dbl("utility.alpha2", [](auto& c) -> auto& { return c.utility.alpha2; }));
  t.push_back(dbl("utility.alpha3", [](auto& c) -> auto& { return c.utility.alpha3; }));
  t.push_back(dbl("utility.delta", [](auto& c) -> auto& { return c.utility.delta; }));

  t.push_back(
      dbl("filter.tau_heading_rate", [](auto& c) -> auto& { return c.filter.heading_rate; }));
  t.push_back(
      dbl("filter.tau_vertical_rate", [](auto& c) -> auto& { return c.filter.vertical_rate; }));
  t.push_back(dbl("filter.tau_speed", [](auto& c) -> auto& { return c.filter.speed; }));

  t.push_back(
      dbl("horizontal.hard_rate_deg", [](auto& c) -> auto& { return c.horizontal.hard_rate_deg; }));
  t.push_back(dbl("horizontal.moderate_rate_deg",
                  [](auto& c) -> auto& { return c.horizontal.moderate_rate_deg; }));
  t.push_back(
      integer("horizontal.rollouts", [](auto& c) -> auto& { return c.horizontal.rollouts; }));
  return t;
}

const std::vector<KeyEntry>& keys() {
  static const std::vector<KeyEntry> table = key_table();
  return table;
}

std::string resolve_alias(const std::string& key) {
  static const std::map<std::string, std::string> aliases{
      {"noise.M_w", "noise.pilot_scale"},
      {"noise.M_WTCAS", "noise.tcas_scale"},
      {"tcas.DMOD", "tcas.dmod"},
      {"tcas.ZTHR", "tcas.zthr"},
      {"strategy.M", "strategy.num_candidates"},
      {"strategy.M_prime", "strategy.num_env_samples"},
  };
  auto it = aliases.find(key);
  return it == aliases.end() ? key : it->second;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void validate(const EncounterConfig& c) {
  require(c.sim.dt > 0, "sim.dt must be positive");
  require(c.sim.max_duration > 0, "sim.max_duration must be positive");
  require(c.sim.reaction_delay >= 0, "sim.reaction_delay must be non-negative");
  require(c.sim.nmac_horizontal > 0 && c.sim.nmac_vertical > 0,
          "nmac thresholds must be positive");
  require(c.gen.t_target_min > 0 && c.gen.t_target_min <= c.gen.t_target_max &&
              c.gen.t_target_max < c.sim.max_duration,
          "gen.t_target range must lie inside (0, sim.max_duration)");
  require(c.gen.speed_min > 0 && c.gen.speed_min <= c.gen.speed_max, "bad gen.speed range");
  require(c.gen.altitude_min <= c.gen.altitude_max, "bad gen.altitude range");
  require(c.gen.vertical_rate_min <= c.gen.vertical_rate_max, "bad gen.vertical_rate range");
  require(c.gen.angle_min_deg <= c.gen.angle_max_deg, "bad gen.angle range");
  require(c.gen.horizontal_miss_max >= 0 && c.gen.vertical_miss_max >= 0,
          "miss distances must be non-negative");
  require(c.gen.min_closing_speed > 0, "gen.min_closing_speed must be positive");
  require(c.noise.pilot >= 0 && c.noise.tcas >= 0, "noise scales must be non-negative");
  require(c.tcas.dmod > 0 && c.tcas.zthr > 0 && c.tcas.tau > 0 && c.tcas.alim > 0,
          "tcas thresholds must be positive");
  require(c.tcas.pilot_delay >= 0, "tcas.pilot_delay must be non-negative");
  require(c.pilot.level >= 1, "strategy.level must be at least 1");
  require(c.pilot.num_candidates >= 1, "strategy.num_candidates must be at least 1");
  require(c.pilot.num_env_samples >= 1, "strategy.num_env_samples must be at least 1");
  require(c.pilot.level0_sigma > 0, "strategy.level0_sigma must be positive");
  require(c.pilot.intent_stay_prob >= 0 && c.pilot.intent_stay_prob <= 1,
          "strategy.intent_stay_prob must lie in [0, 1]");
  require(c.pilot.redraw_cap_factor >= 1, "strategy.redraw_cap_factor must be at least 1");
  require(c.utility.delta > 0, "utility.delta must be positive");
  require(c.utility.alpha1 > c.utility.alpha2 && c.utility.alpha2 > c.utility.alpha3 &&
              c.utility.alpha3 >= 0,
          "utility weights must satisfy alpha1 > alpha2 > alpha3 >= 0");
  require(c.filter.heading_rate > 0 && c.filter.vertical_rate > 0 && c.filter.speed > 0,
          "filter time constants must be positive");
  require(c.horizontal.hard_rate_deg >= c.horizontal.moderate_rate_deg &&
              c.horizontal.moderate_rate_deg > 0,
          "horizontal rates must satisfy hard >= moderate > 0");
  require(c.horizontal.rollouts >= 1, "horizontal.rollouts must be at least 1");
}

}  // namespace

void set_config_value(EncounterConfig& cfg, const std::string& key, const std::string& value) {
  const std::string canonical = resolve_alias(key);
  for (const auto& entry : keys()) {
    if (entry.key == canonical) {
      entry.set(cfg, value);
      validate(cfg);
      return;
    }
  }
  throw ConfigError("unknown configuration key: " + key);
}

EncounterConfig parse_config(const std::string& text) {
  EncounterConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    set_config_value(cfg, key, value);
  }
  validate(cfg);
  return cfg;
}

EncounterConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> config_key_values(const EncounterConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(keys().size());
  for (const auto& entry : keys()) out.emplace_back(entry.key, entry.get(cfg));
  return out;
}

}  // namespace encounter
