#ifndef HALLWAY_EPISODE_HPP_
#define HALLWAY_EPISODE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "hallway/metrics.hpp"
#include "hallway/planner.hpp"
#include "hallway/sim.hpp"

namespace hallway::planner {

/// Tracker memory carried across replan cycles.
struct PerceptionState {
    std::vector<predict::AgentTrack> tracks;
    std::uint64_t cycle{0};
};

/// One receding-horizon cycle: refresh visibility, tracks, fans and
/// phantoms from the simulation, plan, and return the control to hold until
/// the next cycle together with the chosen plan.
std::pair<Twist, Plan> execute_cycle(sim::Simulation& sim, PerceptionState& perception,
                                     const Pose2& goal, const PlannerConfig& cfg);

}  // namespace hallway::planner

namespace hallway::sim {

struct RobotLogRow {
    double t, x, y, theta, v_cmd, omega_cmd;
};
struct HumanLogRow {
    double t;
    int id;
    double x, y, vx, vy;
    int dir;
};
struct PlanLogRow {
    double t, x, y, theta, v_cmd, omega_cmd;
    double j_total, j_terminal, j_coll, j_occl;
    long candidates;
    int emergency;
};

struct EpisodeLogs {
    std::vector<RobotLogRow> robot;
    std::vector<HumanLogRow> humans;
    std::vector<PlanLogRow> plans;
    std::vector<SimEvent> events;
};

struct EpisodeResult {
    bench::EpisodeMetrics metrics;
    EpisodeLogs logs;
};

/// Runs one full episode: planner at the replan period, world at sim_dt,
/// until GoalReached, Collision or Timeout. Bit-deterministic given the
/// scenario and planner seeds.
EpisodeResult run_episode(const ScenarioConfig& scenario, const planner::PlannerConfig& planner);

/// Replays logged states through a fresh detector; event counts must match
/// the online run.
std::vector<SimEvent> recompute_events(const EpisodeLogs& logs, const ScenarioConfig& cfg);

// CSV writers for the episode artifacts (shortest round-trip float format).
std::string robot_csv(const std::vector<RobotLogRow>& rows);
std::string humans_csv(const std::vector<HumanLogRow>& rows);
std::string plans_csv(const std::vector<PlanLogRow>& rows);
std::string events_csv(const std::vector<SimEvent>& events);

}  // namespace hallway::sim

#endif  // HALLWAY_EPISODE_HPP_
