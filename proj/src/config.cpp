#include "hallway/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hallway/util.hpp"

namespace hallway::cfg {

const std::vector<KeySpec>& key_registry() {
    static const std::vector<KeySpec> registry = {
        {"scenario.length", "50", "m", "corridor length (paper presets: 25/50/100)"},
        {"scenario.width", "2", "m", "corridor width"},
        {"scenario.resolution", "0.1", "m", "grid cell size"},
        {"scenario.humans_same_dir", "3", "", "humans walking the robot's way"},
        {"scenario.humans_opposing", "3", "", "humans walking against the robot"},
        {"scenario.human_speed", "1", "m/s", "preferred human speed, fixed per trial (0..3.5)"},
        {"scenario.human_radius", "0.2", "m", "human disc radius"},
        {"scenario.robot_radius", "0.2", "m", "robot disc radius"},
        {"scenario.sim_dt", "0.05", "s", "world integration step"},
        {"scenario.max_time", "0", "s", "episode timeout; 0 = max(120, 4 * length)"},
        {"scenario.seed", "1", "", "world build seed"},
        {"scenario.repulsion_gain", "2", "", "pedestrian repulsion k_rep (accel = k_rep/d^2)"},
        {"scenario.repulsion_range", "1.5", "m", "pedestrian repulsion cutoff"},
        {"scenario.repulsion_cap", "8", "m/s^2", "pedestrian repulsion acceleration cap"},
        {"scenario.goal_gain", "2", "1/s", "pedestrian relaxation toward preferred velocity"},
        {"scenario.reaction_delay", "0.4", "s", "pedestrian reaction latency to the robot"},
        {"scenario.wall_gain", "0.3", "", "wall repulsion gain (accel = gain/d^2)"},
        {"scenario.pass_bias", "0.5", "m/s^2", "rightward dodge bias against oncoming agents"},
        {"events.personal_space", "0.5", "m", "personal-space radius around a human"},
        {"events.path_change_angle", "30", "deg", "heading deviation that counts as a path change"},
        {"events.path_change_duration", "0.5", "s", "deviation must persist this long"},
        {"events.path_change_radius", "2", "m", "robot must be this close to be blamed"},
        {"events.min_heading_speed", "0.1", "m/s", "below this human heading is undefined"},
        {"robot.v_max", "3", "m/s", "top speed"},
        {"robot.omega_max", "1.5", "rad/s", "top turn rate"},
        {"robot.a_max", "2", "m/s^2", "linear acceleration limit"},
        {"robot.alpha_max", "3", "rad/s^2", "angular acceleration limit"},
        {"planner.tree_depth", "3", "", "primitive tree depth"},
        {"planner.n_v", "4", "", "speed grid size"},
        {"planner.n_omega", "5", "", "turn-rate grid size (odd)"},
        {"planner.primitive_duration", "0.5", "s", "primitive length"},
        {"planner.dt_sample", "0.1", "s", "trajectory sample step"},
        {"planner.replan_period", "0.2", "s", "receding-horizon cycle"},
        {"planner.goal_tolerance", "0.5", "m", "goal acceptance radius"},
        {"planner.sensor_range", "10", "m", "omnidirectional sensor range"},
        {"planner.inflation_radius", "0.45", "m", "costmap inflation reach"},
        {"planner.peek_enabled", "true", "", "false multiplies c3 by c3_block_factor"},
        {"planner.c3_block_factor", "10000", "", "c3 multiplier when peeking is off"},
        {"planner.seed", "1", "", "prediction sampling seed"},
        {"risk.c1", "1", "", "terminal (goal) weight"},
        {"risk.c2", "4000", "", "collision weight"},
        {"risk.c3", "120", "", "occlusion (peek) weight"},
        {"risk.alpha_coll", "0", "", "CVaR level for observed agents"},
        {"risk.alpha_peek", "0.9", "", "CVaR level for the occlusion term"},
        {"risk.epsilon_peek", "0.15", "", "occlusion risk budget"},
        {"risk.distance_losses", "false", "", "penetration-depth losses instead of indicators"},
        {"risk.radius_margin", "0.1", "m", "padding added to the human radius in risk checks"},
        {"predict.n_samples", "64", "", "fan samples per tracked agent"},
        {"predict.m_samples", "64", "", "phantom samples"},
        {"predict.sigma_v", "0.2", "m/s", "fan speed noise"},
        {"predict.sigma_omega", "0.25", "rad/s", "fan heading-rate noise"},
        {"predict.v_human_max", "3.5", "m/s", "fastest considered human"},
        {"predict.beta", "0.5", "", "tracker velocity smoothing factor"},
        {"predict.history", "10", "", "tracker history length"},
        {"sweep.seeds", "10", "", "seeds per sweep cell"},
        {"sweep.workers", "0", "", "sweep worker threads; 0 = hardware"},
    };
    return registry;
}

namespace {

const KeySpec* find_spec(const std::string& key) {
    for (const auto& spec : key_registry())
        if (spec.key == key) return &spec;
    return nullptr;
}

constexpr const char* kAxisPrefix = "sweep.axis.";

bool is_axis_key(const std::string& key) {
    return key.rfind(kAxisPrefix, 0) == 0;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
    if (is_axis_key(key)) {
        const std::string target = key.substr(std::string(kAxisPrefix).size());
        if (find_spec(target) == nullptr)
            throw ConfigError("unknown sweep axis key: " + target);
    } else if (find_spec(key) == nullptr) {
        throw ConfigError("unknown config key: " + key);
    }
    values_[key] = value;
}

void Config::load_text(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void Config::load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    load_text(ss.str(), path);
}

std::string Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    const KeySpec* spec = find_spec(key);
    if (spec == nullptr) throw ConfigError("unknown config key: " + key);
    return spec->def;
}

double Config::get_double(const std::string& key) const {
    try {
        return parse_double(get(key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config key " + key + ": not a number: '" + get(key) + "'");
    }
}

int Config::get_int(const std::string& key) const {
    const std::string v = get(key);
    int out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError("config key " + key + ": not an integer: '" + v + "'");
    return out;
}

std::uint64_t Config::get_seed(const std::string& key) const {
    const std::string v = get(key);
    std::uint64_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError("config key " + key + ": not a seed: '" + v + "'");
    return out;
}

bool Config::get_bool(const std::string& key) const {
    const std::string v = get(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key " + key + ": not a boolean: '" + v + "'");
}

std::vector<std::pair<std::string, std::vector<std::string>>> Config::sweep_axes() const {
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (const auto& [key, value] : values_) {
        if (!is_axis_key(key)) continue;
        std::vector<std::string> items;
        std::istringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) items.push_back(item);
        }
        if (items.empty()) throw ConfigError("empty sweep axis: " + key);
        axes.emplace_back(key.substr(std::string(kAxisPrefix).size()), std::move(items));
    }
    return axes;  // map iteration: sorted by axis key
}

std::string Config::effective_text() const {
    std::string out;
    for (const auto& spec : key_registry()) {
        out += spec.key;
        out += " = ";
        out += get(spec.key);
        out += '\n';
    }
    for (const auto& [key, value] : values_) {
        if (!is_axis_key(key)) continue;
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

sim::ScenarioConfig make_scenario(const Config& c) {
    sim::ScenarioConfig s;
    s.corridor_length = c.get_double("scenario.length");
    s.corridor_width = c.get_double("scenario.width");
    s.resolution = c.get_double("scenario.resolution");
    s.n_humans_same_dir = c.get_int("scenario.humans_same_dir");
    s.n_humans_opposing = c.get_int("scenario.humans_opposing");
    s.human_speed = c.get_double("scenario.human_speed");
    s.human_radius = c.get_double("scenario.human_radius");
    s.robot_radius = c.get_double("scenario.robot_radius");
    s.sim_dt = c.get_double("scenario.sim_dt");
    s.max_episode_time = c.get_double("scenario.max_time");
    if (s.max_episode_time == 0.0)
        s.max_episode_time = std::max(120.0, 4.0 * s.corridor_length);
    s.rng_seed = c.get_seed("scenario.seed");
    s.repulsion_gain = c.get_double("scenario.repulsion_gain");
    s.repulsion_range = c.get_double("scenario.repulsion_range");
    s.repulsion_cap = c.get_double("scenario.repulsion_cap");
    s.goal_gain = c.get_double("scenario.goal_gain");
    s.reaction_delay = c.get_double("scenario.reaction_delay");
    s.wall_gain = c.get_double("scenario.wall_gain");
    s.pass_bias = c.get_double("scenario.pass_bias");
    s.personal_space = c.get_double("events.personal_space");
    s.path_change_angle_deg = c.get_double("events.path_change_angle");
    s.path_change_min_duration = c.get_double("events.path_change_duration");
    s.path_change_radius = c.get_double("events.path_change_radius");
    s.min_heading_speed = c.get_double("events.min_heading_speed");
    s.validate();
    return s;
}

planner::PlannerConfig make_planner(const Config& c) {
    planner::PlannerConfig p;
    p.risk.c1 = c.get_double("risk.c1");
    p.risk.c2 = c.get_double("risk.c2");
    p.risk.c3 = c.get_double("risk.c3");
    p.risk.alpha_coll = c.get_double("risk.alpha_coll");
    p.risk.alpha_peek = c.get_double("risk.alpha_peek");
    p.risk.epsilon_peek = c.get_double("risk.epsilon_peek");
    p.risk.distance_losses = c.get_bool("risk.distance_losses");
    p.risk.robot_radius = c.get_double("scenario.robot_radius");
    p.risk.human_radius =
        c.get_double("scenario.human_radius") + c.get_double("risk.radius_margin");
    p.limits.v_max = c.get_double("robot.v_max");
    p.limits.omega_max = c.get_double("robot.omega_max");
    p.limits.a_max = c.get_double("robot.a_max");
    p.limits.alpha_max = c.get_double("robot.alpha_max");
    p.grid.n_v = c.get_int("planner.n_v");
    p.grid.n_omega = c.get_int("planner.n_omega");
    p.tracker.beta = c.get_double("predict.beta");
    p.tracker.history = c.get_int("predict.history");
    p.tracker.v_human_max = c.get_double("predict.v_human_max");
    p.tracker.human_radius = c.get_double("scenario.human_radius");
    p.prediction.n_samples = c.get_int("predict.n_samples");
    p.prediction.m_samples = c.get_int("predict.m_samples");
    p.prediction.sigma_v = c.get_double("predict.sigma_v");
    p.prediction.sigma_omega = c.get_double("predict.sigma_omega");
    p.tree_depth = c.get_int("planner.tree_depth");
    p.primitive_duration = c.get_double("planner.primitive_duration");
    p.dt_sample = c.get_double("planner.dt_sample");
    p.replan_period = c.get_double("planner.replan_period");
    p.goal_tolerance = c.get_double("planner.goal_tolerance");
    p.sensor_range = c.get_double("planner.sensor_range");
    p.inflation_radius = c.get_double("planner.inflation_radius");
    p.peek_enabled = c.get_bool("planner.peek_enabled");
    p.c3_block_factor = c.get_double("planner.c3_block_factor");
    p.rng_seed = c.get_seed("planner.seed");
    p.validate();
    return p;
}

namespace {

struct Preset {
    const char* name;
    std::vector<std::pair<const char*, const char*>> overrides;
};

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = {
        {"corridor25", {{"scenario.length", "25"}}},
        {"corridor50", {{"scenario.length", "50"}}},
        {"corridor100", {{"scenario.length", "100"}}},
        {"paper-ratio",
         {{"scenario.length", "50"},
          {"scenario.human_speed", "1"},
          {"sweep.axis.risk.c3", "1.5,15,150,1500,15000,150000,1500000"},
          {"sweep.seeds", "10"}}},
        {"paper-speed",
         {{"scenario.length", "50"},
          {"sweep.axis.scenario.human_speed",
           "0.25,0.5,0.75,1,1.25,1.5,1.75,2,2.25,2.5"},
          {"sweep.seeds", "10"}}},
        {"paper-speed-peekoff",
         {{"scenario.length", "50"},
          {"planner.peek_enabled", "false"},
          {"sweep.axis.scenario.human_speed",
           "0.25,0.5,0.75,1,1.25,1.5,1.75,2,2.25,2.5"},
          {"sweep.seeds", "10"}}},
        {"paper-corridor",
         {{"scenario.human_speed", "1"},
          {"sweep.axis.scenario.length", "25,50,100"},
          {"sweep.axis.planner.peek_enabled", "true,false"},
          {"sweep.seeds", "10"}}},
    };
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : presets()) names.push_back(p.name);
    return names;
}

bool apply_preset(Config& c, const std::string& name) {
    for (const auto& p : presets()) {
        if (name != p.name) continue;
        for (const auto& [k, v] : p.overrides) c.set(k, v);
        return true;
    }
    return false;
}

}  // namespace hallway::cfg
