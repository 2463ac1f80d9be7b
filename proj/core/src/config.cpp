#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "donsker/errors.hpp"
#include "donsker/harness.hpp"

namespace donsker {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + key + "': expected unsigned integer, got '" +
                      value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected real number, got '" + value +
                      "'");
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  bool have_k = false, have_r = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key or value");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("duplicate key '" + key + "'");
    }

    if (key == "name") {
      cfg.name = value;
    } else if (key == "distribution") {
      cfg.distribution.kind = dist_kind_from_string(value);
    } else if (key == "sigma") {
      cfg.distribution.sigma = parse_real(key, value);
    } else if (key == "n_list") {
      for (const auto& item : split_list(value)) {
        cfg.n_list.push_back(parse_u64(key, item));
      }
    } else if (key == "grid_size") {
      cfg.grid_size = parse_u64(key, value);
    } else if (key == "schedule") {
      cfg.schedule.kind = schedule_kind_from_string(value);
    } else if (key == "k") {
      cfg.schedule.k = parse_u64(key, value);
      have_k = true;
    } else if (key == "r") {
      cfg.schedule.r = parse_real(key, value);
      have_r = true;
    } else if (key == "selection") {
      cfg.selection = selection_from_string(value);
    } else if (key == "replications") {
      cfg.replications = parse_u64(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, value);
    } else if (key == "suites") {
      for (const auto& item : split_list(value)) {
        cfg.suites.push_back(suite_from_string(item));
      }
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  for (const char* required : {"distribution", "n_list", "replications",
                               "seed", "suites"}) {
    if (!seen.count(required)) {
      throw ConfigError(std::string("missing required key '") + required + "'");
    }
  }
  if (cfg.schedule.kind == ScheduleKind::fixed_k && !have_k) {
    throw ConfigError("schedule=fixed_k requires key 'k'");
  }
  if (cfg.schedule.kind == ScheduleKind::power_law && !have_r) {
    throw ConfigError("schedule=power_law requires key 'r'");
  }
  if (have_k && cfg.schedule.kind != ScheduleKind::fixed_k) {
    throw ConfigError("key 'k' is only valid with schedule=fixed_k");
  }
  if (have_r && cfg.schedule.kind != ScheduleKind::power_law) {
    throw ConfigError("key 'r' is only valid with schedule=power_law");
  }

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.distribution.sigma > 0.0)) {
    throw ConfigError("sigma must be > 0");
  }
  if (cfg.n_list.empty()) throw ConfigError("n_list must not be empty");
  for (auto n : cfg.n_list) {
    if (n < 2) throw ConfigError("every n must be >= 2");
  }
  if (cfg.grid_size < 10) throw ConfigError("grid_size must be >= 10");
  if (cfg.suites.empty()) throw ConfigError("suites must not be empty");
  if (cfg.replications < 1000) {
    throw ConfigError("replications must be >= 1000 for statistical suites");
  }
  std::set<SuiteKind> unique(cfg.suites.begin(), cfg.suites.end());
  if (unique.size() != cfg.suites.size()) {
    throw ConfigError("duplicate suite requested");
  }
  if (cfg.schedule.kind == ScheduleKind::power_law &&
      !(cfg.schedule.r > 0.0 && cfg.schedule.r < 1.0)) {
    throw ConfigError("power_law schedule requires r in (0,1)");
  }
  const bool needs_continuous =
      unique.count(SuiteKind::empirical_bridge) ||
      unique.count(SuiteKind::sequential_km);
  if (needs_continuous && !is_continuous(cfg.distribution.kind)) {
    throw ConfigError(
        "empirical_bridge/sequential_km suites need a continuous "
        "distribution");
  }
}

const char* to_string(SuiteKind suite) {
  switch (suite) {
    case SuiteKind::donsker_complete: return "donsker_complete";
    case SuiteKind::donsker_deleted: return "donsker_deleted";
    case SuiteKind::polygonal: return "polygonal";
    case SuiteKind::empirical_bridge: return "empirical_bridge";
    case SuiteKind::sequential_km: return "sequential_km";
    case SuiteKind::lemma2_structure: return "lemma2_structure";
    case SuiteKind::negligibility_violation: return "negligibility_violation";
  }
  return "?";
}

SuiteKind suite_from_string(std::string_view name) {
  if (name == "donsker_complete") return SuiteKind::donsker_complete;
  if (name == "donsker_deleted") return SuiteKind::donsker_deleted;
  if (name == "polygonal") return SuiteKind::polygonal;
  if (name == "empirical_bridge") return SuiteKind::empirical_bridge;
  if (name == "sequential_km") return SuiteKind::sequential_km;
  if (name == "lemma2_structure") return SuiteKind::lemma2_structure;
  if (name == "negligibility_violation")
    return SuiteKind::negligibility_violation;
  throw ConfigError("unknown suite '" + std::string(name) + "'");
}

}  // namespace donsker
