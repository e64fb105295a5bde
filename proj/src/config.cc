#include <cmath>
#include <fstream>

#include "bwr/error.h"
#include "bwr/experiment.h"
#include "bwr/topology.h"

namespace bwr {
namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field \"") + key +
                      "\" has the wrong type");
  }
}

std::string resolve_file(const std::string& ref,
                         const std::filesystem::path& base_dir) {
  std::filesystem::path p(ref);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.string();
}

TrafficPattern parse_traffic(const json& t,
                             const std::filesystem::path& base_dir) {
  if (!t.is_object()) throw ConfigError("\"traffic\" must be an object");
  TrafficPattern pattern;
  pattern.arrival_rate = get_or(t, "arrival_rate", 1.0);
  pattern.flow_count = get_or<std::size_t>(t, "flows", 500);
  const auto kind = get_or<std::string>(t, "pattern", "light-tailed");
  if (kind == "light-tailed") {
    pattern.sizes = LightTailed{get_or(t, "mean", 50.0), get_or(t, "max", 500.0)};
  } else if (kind == "heavy-tailed") {
    pattern.sizes = HeavyTailed{get_or(t, "mean", 50.0), get_or(t, "min", 2.0),
                                get_or(t, "max", 500.0)};
  } else if (kind == "empirical") {
    if (!t.contains("cdf")) {
      throw ConfigError("empirical traffic needs a \"cdf\" file");
    }
    const auto file = resolve_file(t.at("cdf").get<std::string>(), base_dir);
    pattern.sizes = Empirical{load_cdf_csv(file), file};
  } else {
    throw ConfigError("unknown traffic pattern \"" + kind + "\"");
  }
  return pattern;
}

}  // namespace

ScenarioConfig parse_config(const json& doc,
                            const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ScenarioConfig c;
  c.topology = get_or<std::string>(doc, "topology", c.topology);
  if (!is_builtin_topology(c.topology)) {
    c.topology = resolve_file(c.topology, base_dir);
  }

  if (doc.contains("capacity")) {
    const json& cap = doc.at("capacity");
    if (!cap.is_object()) throw ConfigError("\"capacity\" must be an object");
    const auto mode = get_or<std::string>(cap, "mode", "random");
    if (mode == "random") {
      c.capacity_mode = CapacityMode::kRandom;
    } else if (mode == "declared") {
      c.capacity_mode = CapacityMode::kDeclared;
    } else {
      throw ConfigError("unknown capacity mode \"" + mode + "\"");
    }
    c.capacity_low = get_or(cap, "low", c.capacity_low);
    c.capacity_high = get_or(cap, "high", c.capacity_high);
  }
  if (doc.contains("traffic")) {
    c.pattern = parse_traffic(doc.at("traffic"), base_dir);
  }
  if (doc.contains("routers")) {
    c.routers.clear();
    for (const auto& name : get_or<std::vector<std::string>>(doc, "routers", {})) {
      c.routers.push_back(parse_router(name));
    }
  }
  if (doc.contains("policies")) {
    c.policies.clear();
    for (const auto& name :
         get_or<std::vector<std::string>>(doc, "policies", {})) {
      c.policies.push_back(parse_policy(name));
    }
  }
  c.repetitions = get_or<std::size_t>(doc, "repetitions", c.repetitions);
  c.base_seed = get_or<std::uint64_t>(doc, "seed", c.base_seed);
  c.record_router_time =
      get_or(doc, "record_router_time", c.record_router_time);
  c.threads = get_or<std::size_t>(doc, "threads", c.threads);
  validate_config(c);
  return c;
}

ScenarioConfig load_config_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return parse_config(doc, file.parent_path());
}

void validate_config(const ScenarioConfig& config) {
  if (config.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (config.routers.empty()) throw ConfigError("at least one router needed");
  if (config.policies.empty()) throw ConfigError("at least one policy needed");
  if (!(config.capacity_low > 0.0) ||
      !(config.capacity_high >= config.capacity_low) ||
      !std::isfinite(config.capacity_high)) {
    throw ConfigError("capacity range needs 0 < low <= high");
  }
  validate_pattern(config.pattern);
}

}  // namespace bwr
