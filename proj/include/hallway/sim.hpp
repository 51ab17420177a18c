#ifndef HALLWAY_SIM_HPP_
#define HALLWAY_SIM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hallway/dynamics.hpp"
#include "hallway/grid.hpp"
#include "hallway/predict.hpp"

namespace hallway::sim {

struct ScenarioConfig {
    double corridor_length{50.0};  // m (paper presets use 25 / 50 / 100)
    double corridor_width{2.0};    // m
    double resolution{0.1};        // m per cell
    int n_humans_same_dir{3};
    int n_humans_opposing{3};
    double human_speed{1.0};       // m/s, fixed per trial, in [0, 3.5]
    double human_radius{0.2};      // m
    double robot_radius{0.2};      // m
    double sim_dt{0.05};           // s
    double max_episode_time{200.0};// s
    std::uint64_t rng_seed{1};

    // Pedestrian model (preferred velocity + capped inverse-square repulsion).
    double repulsion_gain{2.0};        // k_rep, accel = k_rep / d^2
    double repulsion_range{1.5};       // m
    double repulsion_cap{8.0};         // m/s^2
    double wall_gain{0.3};             // walls push with wall_gain / d^2
    double pass_bias{0.5};             // m/s^2 rightward bias against oncoming agents
    double goal_gain{2.0};             // relaxation toward preferred velocity
    double reaction_delay{0.4};        // s, humans see the robot this far in the past

    // Event thresholds.
    double personal_space{0.5};            // m (robot center to human center)
    double path_change_angle_deg{30.0};    // deviation from nominal direction
    double path_change_min_duration{0.5};  // s
    double path_change_radius{2.0};        // m, robot attribution radius
    double min_heading_speed{0.1};         // m/s below which heading is undefined

    void validate() const;
    double lane_same() const { return corridor_width * 0.25; }
    double lane_opposing() const { return corridor_width * 0.75; }
    Pose2 robot_start() const { return {1.0, lane_same(), 0.0}; }
    Pose2 robot_goal() const { return {corridor_length - 1.2, lane_same(), 0.0}; }
};

enum class EventKind { Collision, PersonalSpaceEntry, HumanPathChange, GoalReached, Timeout };

const char* to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(const std::string& s);

struct SimEvent {
    EventKind kind{};
    double time{0.0};
    int agent_id{-1};  // -1 for robot-only events
};

struct HumanState {
    int id{0};
    Vec2 position{};
    Vec2 velocity{};
    int dir{1};  // +1 toward the +x end, -1 toward the -x end
    double radius{0.2};
    double preferred_speed{0.0};
};

/// Collision / personal-space / path-change detection as a pure function of
/// the state stream: feed states in time order, collect events. Replaying a
/// logged episode through a fresh detector reproduces the online events.
class EventDetector {
  public:
    explicit EventDetector(const ScenarioConfig& cfg) : cfg_(cfg) {}

    std::vector<SimEvent> feed(double t, const Vec2& robot_position,
                               const std::vector<HumanState>& humans);

  private:
    struct PerHuman {
        bool in_personal_space{false};
        double deviation_time{0.0};
        bool path_event_fired{false};
    };
    ScenarioConfig cfg_;
    std::map<int, PerHuman> state_;  // humans leave the corridor at their end
    bool collided_{false};
};

/// Ground-truth world state for one episode.
struct Simulation {
    ScenarioConfig cfg{};
    world::OccupancyGrid grid;
    world::Costmap costmap;  // filled by the episode runner (inflation radii live there)
    Pose2 robot_pose{};
    Twist robot_twist{};
    std::vector<HumanState> humans;
    double time{0.0};
    EventDetector detector;
    // Recent robot positions, newest last; humans react to the position
    // reaction_delay seconds back.
    std::vector<Vec2> robot_history;

    explicit Simulation(const ScenarioConfig& c) : cfg(c), detector(c) {}

    Vec2 delayed_robot_position() const;

    std::vector<world::AgentDisc> agent_discs() const;
    /// Humans whose center the robot can see (own disc ignored), in id order.
    std::vector<predict::Observation> observe(double sensor_range) const;
};

/// Builds the corridor world: walls, two nominal lanes of humans at
/// seeded-random stations, robot at the start pose. Overlapping spawns are
/// redrawn up to 100 times before a config error.
Simulation build_scenario(const ScenarioConfig& cfg);

/// Advances the world one step: robot under the commanded twist, humans
/// under the preferred-velocity/repulsion model. Returns the events detected
/// at the new state.
std::vector<SimEvent> step_sim(Simulation& sim, const Twist& command, double dt);

}  // namespace hallway::sim

#endif  // HALLWAY_SIM_HPP_
