#ifndef HALLWAY_CONFIG_HPP_
#define HALLWAY_CONFIG_HPP_

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hallway/planner.hpp"
#include "hallway/sim.hpp"

namespace hallway::cfg {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct KeySpec {
    std::string key;
    std::string def;
    std::string unit;  // empty for dimensionless
    std::string description;
};

/// Registered keys with defaults, units and one-line descriptions.
const std::vector<KeySpec>& key_registry();

/// Flat `section.key = value` configuration. Unknown keys are rejected;
/// unset keys fall back to registry defaults. Keys under `sweep.axis.` are
/// dynamic: the suffix must itself be a registered key.
class Config {
  public:
    Config() = default;

    void set(const std::string& key, const std::string& value);
    void load_text(const std::string& text, const std::string& source = "<text>");
    void load_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_seed(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    /// Axis overrides collected from `sweep.axis.<key> = v1,v2,...`.
    std::vector<std::pair<std::string, std::vector<std::string>>> sweep_axes() const;

    /// Every registered key with its effective value, sorted, one per line.
    /// Reloading this text reproduces the configuration exactly.
    std::string effective_text() const;

    const std::map<std::string, std::string>& explicit_values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

sim::ScenarioConfig make_scenario(const Config& c);
planner::PlannerConfig make_planner(const Config& c);

/// Named presets (value overrides on top of defaults).
std::vector<std::string> preset_names();
bool apply_preset(Config& c, const std::string& name);

}  // namespace hallway::cfg

#endif  // HALLWAY_CONFIG_HPP_
