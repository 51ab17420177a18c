#include "hallway/episode.hpp"

#include <cmath>
#include <stdexcept>

#include "hallway/rng.hpp"
#include "hallway/util.hpp"

namespace hallway::planner {

namespace {

// Endgame: inside one primitive stride of the goal disc the cost surface is
// a plateau and argmin ties stop making progress, so close out by steering
// straight at the goal. Only engages with no human nearby and a statically
// clear straight line.
std::optional<Twist> goal_latch(const sim::Simulation& sim,
                                const std::vector<predict::Observation>& observations,
                                const Pose2& goal, const PlannerConfig& cfg) {
    const Vec2 pos = sim.robot_pose.position();
    const double d = distance(pos, goal.position());
    const double stride = cfg.limits.v_max * cfg.primitive_duration / 3.0;  // one grid stride
    if (d > cfg.goal_tolerance + stride + 0.1) return std::nullopt;
    for (const auto& obs : observations)
        if (distance(pos, obs.position) < 2.5) return std::nullopt;
    if (!world::segment_clear(sim.grid, pos, goal.position(), {})) return std::nullopt;

    const double bearing = std::atan2(goal.y - sim.robot_pose.y, goal.x - sim.robot_pose.x);
    const double err = wrap_angle(bearing - sim.robot_pose.theta);
    Twist cmd;
    cmd.omega = std::clamp(2.0 * err, -cfg.limits.omega_max, cfg.limits.omega_max);
    if (std::abs(err) < 0.6) {
        const double v_target = std::clamp(2.0 * d, 0.3, 1.5);
        cmd.v = std::min(v_target, sim.robot_twist.v + cfg.limits.a_max * cfg.replan_period);
    }
    return cmd;
}

}  // namespace

std::pair<Twist, Plan> execute_cycle(sim::Simulation& sim, PerceptionState& perception,
                                     const Pose2& goal, const PlannerConfig& cfg) {
    const auto mask =
        world::visible_region(sim.grid, sim.robot_pose, cfg.sensor_range, sim.agent_discs());
    const auto observations = sim.observe(cfg.sensor_range);
    perception.tracks =
        predict::update_tracks(perception.tracks, observations, cfg.replan_period, cfg.tracker);

    if (const auto latch = goal_latch(sim, observations, goal, cfg)) {
        ++perception.cycle;
        Plan latched;
        latched.trajectory.dt_sample = cfg.dt_sample;
        latched.trajectory.poses.push_back(sim.robot_pose);
        latched.trajectory.twists.push_back(*latch);
        for (int i = 0; i < cfg.steps_per_primitive() * cfg.tree_depth; ++i) {
            latched.trajectory.poses.push_back(
                dyn::step_unicycle(latched.trajectory.poses.back(), *latch, cfg.dt_sample));
            latched.trajectory.twists.push_back(*latch);
        }
        latched.sequence = {dyn::MotionPrimitive{*latch, cfg.horizon(), cfg.dt_sample,
                                                 latched.trajectory.poses}};
        latched.cost = risk::total_cost(latched.trajectory, goal, sim.costmap, {}, {},
                                        cfg.effective_risk());
        return {*latch, std::move(latched)};
    }

    // One generator stream per cycle; fans draw first (tracks are already in
    // ascending id order), phantoms afterwards.
    std::mt19937_64 rng(mix_seed(cfg.rng_seed, perception.cycle));
    std::vector<predict::PredictionFan> fans;
    fans.reserve(perception.tracks.size());
    for (const auto& track : perception.tracks)
        fans.push_back(predict::predict_fan(track, cfg.horizon(), cfg.dt_sample,
                                            cfg.prediction.n_samples, cfg.prediction.sigma_v,
                                            cfg.prediction.sigma_omega, cfg.tracker, rng));
    const auto frontier = world::frontier_cells(mask, sim.grid);
    const auto phantoms =
        predict::spawn_phantoms(frontier, mask, sim.grid, sim.robot_pose, cfg.horizon(),
                                cfg.dt_sample, cfg.prediction.m_samples, cfg.tracker.v_human_max,
                                rng);

    Plan p = plan(sim.robot_pose, sim.robot_twist, goal, sim.costmap, fans, phantoms, cfg);
    ++perception.cycle;
    return {p.first_control(), std::move(p)};
}

}  // namespace hallway::planner

namespace hallway::sim {

namespace {

void log_state(EpisodeLogs& logs, const Simulation& sim, const Twist& applied) {
    logs.robot.push_back({sim.time, sim.robot_pose.x, sim.robot_pose.y, sim.robot_pose.theta,
                          applied.v, applied.omega});
    for (const auto& h : sim.humans)
        logs.humans.push_back(
            {sim.time, h.id, h.position.x, h.position.y, h.velocity.x, h.velocity.y, h.dir});
}

}  // namespace

EpisodeResult run_episode(const ScenarioConfig& scenario, const planner::PlannerConfig& planner_cfg) {
    scenario.validate();
    planner_cfg.validate();
    const double cycle_ratio = planner_cfg.replan_period / scenario.sim_dt;
    const int steps_per_cycle = static_cast<int>(std::lround(cycle_ratio));
    if (steps_per_cycle < 1 || std::abs(cycle_ratio - steps_per_cycle) > 1e-9)
        throw std::invalid_argument("run_episode: replan_period must be a multiple of sim_dt");

    Simulation sim = build_scenario(scenario);
    sim.costmap = world::inflate(sim.grid, planner_cfg.risk.robot_radius,
                                 planner_cfg.inflation_radius);
    const Pose2 goal = scenario.robot_goal();

    EpisodeResult result;
    result.metrics.scenario_seed = scenario.rng_seed;
    result.metrics.planner_seed = planner_cfg.rng_seed;

    planner::PerceptionState perception;
    Twist applied{};
    log_state(result.logs, sim, applied);

    bool done = false;
    long step = 0;
    while (!done && sim.time < scenario.max_episode_time - 1e-9) {
        if (step % steps_per_cycle == 0) {
            auto [control, p] = planner::execute_cycle(sim, perception, goal, planner_cfg);
            applied = control;
            result.logs.plans.push_back({sim.time, sim.robot_pose.x, sim.robot_pose.y,
                                         sim.robot_pose.theta, control.v, control.omega,
                                         p.cost.total, p.cost.terminal, p.cost.collision,
                                         p.cost.occlusion, p.candidate_count,
                                         p.emergency_stop ? 1 : 0});
        }
        const Vec2 before = sim.robot_pose.position();
        const auto events = step_sim(sim, applied, scenario.sim_dt);
        ++step;
        result.metrics.path_length += distance(before, sim.robot_pose.position());
        log_state(result.logs, sim, applied);

        for (const auto& ev : events) {
            result.logs.events.push_back(ev);
            switch (ev.kind) {
                case EventKind::Collision:
                    result.metrics.collisions += 1;
                    result.metrics.outcome = bench::Outcome::Collision;
                    done = true;
                    break;
                case EventKind::PersonalSpaceEntry: result.metrics.ps_violations += 1; break;
                case EventKind::HumanPathChange: result.metrics.path_changes += 1; break;
                default: break;
            }
        }
        if (!done &&
            distance(sim.robot_pose.position(), goal.position()) <= planner_cfg.goal_tolerance) {
            result.logs.events.push_back({EventKind::GoalReached, sim.time, -1});
            result.metrics.outcome = bench::Outcome::Goal;
            result.metrics.time_to_goal = sim.time;
            result.metrics.avg_speed = result.metrics.path_length / sim.time;
            done = true;
        }
    }
    if (!done) {
        result.logs.events.push_back({EventKind::Timeout, sim.time, -1});
        result.metrics.outcome = bench::Outcome::Timeout;
    }
    return result;
}

std::vector<SimEvent> recompute_events(const EpisodeLogs& logs, const ScenarioConfig& cfg) {
    EventDetector detector(cfg);
    std::vector<SimEvent> events;
    std::size_t hi = 0;
    for (std::size_t ri = 0; ri < logs.robot.size(); ++ri) {
        const auto& r = logs.robot[ri];
        std::vector<HumanState> humans;
        while (hi < logs.humans.size() && logs.humans[hi].t == r.t) {
            const auto& h = logs.humans[hi];
            humans.push_back({h.id, {h.x, h.y}, {h.vx, h.vy}, h.dir, cfg.human_radius,
                              cfg.human_speed});
            ++hi;
        }
        if (ri == 0) continue;  // initial state precedes the first step, as online
        auto evs = detector.feed(r.t, {r.x, r.y}, humans);
        events.insert(events.end(), evs.begin(), evs.end());
    }
    return events;
}

namespace {
void append_num(std::string& out, double v, char sep) {
    out += fmt_double(v);
    out += sep;
}
}  // namespace

std::string robot_csv(const std::vector<RobotLogRow>& rows) {
    std::string out = "t,x,y,theta,v_cmd,omega_cmd\n";
    for (const auto& r : rows) {
        append_num(out, r.t, ',');
        append_num(out, r.x, ',');
        append_num(out, r.y, ',');
        append_num(out, r.theta, ',');
        append_num(out, r.v_cmd, ',');
        append_num(out, r.omega_cmd, '\n');
    }
    return out;
}

std::string humans_csv(const std::vector<HumanLogRow>& rows) {
    std::string out = "t,id,x,y,vx,vy,dir\n";
    for (const auto& r : rows) {
        append_num(out, r.t, ',');
        out += std::to_string(r.id);
        out += ',';
        append_num(out, r.x, ',');
        append_num(out, r.y, ',');
        append_num(out, r.vx, ',');
        append_num(out, r.vy, ',');
        out += std::to_string(r.dir);
        out += '\n';
    }
    return out;
}

std::string plans_csv(const std::vector<PlanLogRow>& rows) {
    std::string out = "t,x,y,theta,v_cmd,omega_cmd,J_total,J_terminal,J_coll,J_occl,candidates,emergency\n";
    for (const auto& r : rows) {
        append_num(out, r.t, ',');
        append_num(out, r.x, ',');
        append_num(out, r.y, ',');
        append_num(out, r.theta, ',');
        append_num(out, r.v_cmd, ',');
        append_num(out, r.omega_cmd, ',');
        append_num(out, r.j_total, ',');
        append_num(out, r.j_terminal, ',');
        append_num(out, r.j_coll, ',');
        append_num(out, r.j_occl, ',');
        out += std::to_string(r.candidates);
        out += ',';
        out += std::to_string(r.emergency);
        out += '\n';
    }
    return out;
}

std::string events_csv(const std::vector<SimEvent>& events) {
    std::string out = "t,kind,agent_id\n";
    for (const auto& ev : events) {
        append_num(out, ev.time, ',');
        out += to_string(ev.kind);
        out += ',';
        out += std::to_string(ev.agent_id);
        out += '\n';
    }
    return out;
}

}  // namespace hallway::sim
