#include "hallway/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hallway/rng.hpp"

namespace hallway::sim {

void ScenarioConfig::validate() const {
    if (corridor_length <= 4.0 || corridor_width <= 0.6)
        throw std::invalid_argument("scenario: corridor too small");
    if (resolution <= 0.0) throw std::invalid_argument("scenario: resolution must be > 0");
    if (human_speed < 0.0 || human_speed > 3.5)
        throw std::invalid_argument("scenario: human_speed must be in [0, 3.5]");
    if (n_humans_same_dir < 0 || n_humans_opposing < 0)
        throw std::invalid_argument("scenario: negative human count");
    if (human_radius <= 0.0 || robot_radius <= 0.0)
        throw std::invalid_argument("scenario: radii must be > 0");
    if (sim_dt <= 0.0) throw std::invalid_argument("scenario: sim_dt must be > 0");
    if (max_episode_time < 0.0)
        throw std::invalid_argument("scenario: max_episode_time must be >= 0");
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Collision: return "collision";
        case EventKind::PersonalSpaceEntry: return "personal_space";
        case EventKind::HumanPathChange: return "path_change";
        case EventKind::GoalReached: return "goal_reached";
        case EventKind::Timeout: return "timeout";
    }
    return "?";
}

std::optional<EventKind> event_kind_from_string(const std::string& s) {
    if (s == "collision") return EventKind::Collision;
    if (s == "personal_space") return EventKind::PersonalSpaceEntry;
    if (s == "path_change") return EventKind::HumanPathChange;
    if (s == "goal_reached") return EventKind::GoalReached;
    if (s == "timeout") return EventKind::Timeout;
    return std::nullopt;
}

std::vector<SimEvent> EventDetector::feed(double t, const Vec2& robot_position,
                                          const std::vector<HumanState>& humans) {
    std::vector<SimEvent> events;
    const double dev_limit = cfg_.path_change_angle_deg * kPi / 180.0;
    for (std::size_t i = 0; i < humans.size(); ++i) {
        const HumanState& h = humans[i];
        PerHuman& st = state_[h.id];
        const double d = distance(robot_position, h.position);

        if (!collided_ && d < cfg_.robot_radius + h.radius) {
            events.push_back({EventKind::Collision, t, h.id});
            collided_ = true;
        }

        const bool inside = d < cfg_.personal_space;
        if (inside && !st.in_personal_space)
            events.push_back({EventKind::PersonalSpaceEntry, t, h.id});
        st.in_personal_space = inside;

        // Sustained deviation from the nominal travel direction while the
        // robot is nearby counts as one path change per contiguous stretch.
        const double speed = h.velocity.norm();
        bool deviating = false;
        if (speed > cfg_.min_heading_speed && d < cfg_.path_change_radius) {
            const double heading = std::atan2(h.velocity.y, h.velocity.x);
            const double nominal = h.dir > 0 ? 0.0 : kPi;
            deviating = std::abs(wrap_angle(heading - nominal)) > dev_limit;
        }
        if (deviating) {
            st.deviation_time += cfg_.sim_dt;
            if (!st.path_event_fired && st.deviation_time >= cfg_.path_change_min_duration) {
                events.push_back({EventKind::HumanPathChange, t, h.id});
                st.path_event_fired = true;
            }
        } else {
            st.deviation_time = 0.0;
            st.path_event_fired = false;
        }
    }
    return events;
}

std::vector<world::AgentDisc> Simulation::agent_discs() const {
    std::vector<world::AgentDisc> discs;
    discs.reserve(humans.size());
    for (const auto& h : humans) discs.push_back({h.position, h.radius});
    return discs;
}

Vec2 Simulation::delayed_robot_position() const {
    if (robot_history.empty()) return robot_pose.position();
    const std::size_t lag =
        static_cast<std::size_t>(std::lround(cfg.reaction_delay / cfg.sim_dt));
    if (lag == 0 || robot_history.size() <= lag) return robot_history.front();
    return robot_history[robot_history.size() - 1 - lag];
}

std::vector<predict::Observation> Simulation::observe(double sensor_range) const {
    std::vector<predict::Observation> obs;
    const auto discs = agent_discs();
    const Vec2 eye = robot_pose.position();
    for (std::size_t i = 0; i < humans.size(); ++i) {
        if (distance(eye, humans[i].position) > sensor_range) continue;
        if (world::segment_clear(grid, eye, humans[i].position, discs, static_cast<int>(i)))
            obs.push_back({humans[i].id, humans[i].position});
    }
    return obs;
}

Simulation build_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    Simulation sim(cfg);

    const int interior_w = static_cast<int>(std::lround(cfg.corridor_length / cfg.resolution));
    const int interior_h = static_cast<int>(std::lround(cfg.corridor_width / cfg.resolution));
    sim.grid = world::make_grid(cfg.resolution, interior_w + 2, interior_h + 2,
                                {-cfg.resolution, -cfg.resolution});
    for (int col = 0; col < sim.grid.width; ++col) {
        sim.grid.set(col, 0, world::Cell::Occupied);
        sim.grid.set(col, sim.grid.height - 1, world::Cell::Occupied);
    }
    for (int row = 0; row < sim.grid.height; ++row) {
        sim.grid.set(0, row, world::Cell::Occupied);
        sim.grid.set(sim.grid.width - 1, row, world::Cell::Occupied);
    }

    sim.robot_pose = cfg.robot_start();
    sim.robot_twist = {0.0, 0.0};

    std::mt19937_64 rng(cfg.rng_seed);
    const double min_sep = std::max(0.9, 2.0 * cfg.human_radius + 0.2);
    auto spawn = [&](int id, bool opposing) {
        const double lane = opposing ? cfg.lane_opposing() : cfg.lane_same();
        const double lo = (opposing ? 0.45 : 0.15) * cfg.corridor_length;
        const double hi = (opposing ? 0.95 : 0.70) * cfg.corridor_length;
        for (int attempt = 0; attempt < 100; ++attempt) {
            Vec2 p{uniform_range(rng, lo, hi), lane};
            bool ok = distance(p, sim.robot_pose.position()) > 2.0;
            for (const auto& other : sim.humans)
                if (distance(p, other.position) < min_sep) { ok = false; break; }
            if (!ok) continue;
            HumanState h;
            h.id = id;
            h.position = p;
            h.dir = opposing ? -1 : 1;
            h.radius = cfg.human_radius;
            h.preferred_speed = cfg.human_speed;
            h.velocity = {h.dir * cfg.human_speed, 0.0};
            sim.humans.push_back(h);
            return;
        }
        throw std::invalid_argument("build_scenario: could not place humans without overlap");
    };
    int id = 0;
    for (int i = 0; i < cfg.n_humans_same_dir; ++i) spawn(id++, false);
    for (int i = 0; i < cfg.n_humans_opposing; ++i) spawn(id++, true);
    return sim;
}

namespace {

// Agent-agent repulsion works on surface clearance so close approaches brake
// hard enough to make standing obstacles collision-free.
Vec2 repulsion_from(const Vec2& at, const Vec2& source, double clearance_offset,
                    const ScenarioConfig& cfg) {
    const Vec2 away = at - source;
    const double d_centers = away.norm();
    if (d_centers >= cfg.repulsion_range || d_centers < 1e-9) return {0.0, 0.0};
    const double d = std::max(0.05, d_centers - clearance_offset);
    const double mag = std::min(cfg.repulsion_cap, cfg.repulsion_gain / (d * d));
    return away * (mag / d_centers);
}

}  // namespace

std::vector<SimEvent> step_sim(Simulation& sim, const Twist& command, double dt) {
    if (sim.robot_history.empty()) sim.robot_history.push_back(sim.robot_pose.position());
    sim.robot_pose = dyn::step_unicycle(sim.robot_pose, command, dt);
    sim.robot_twist = command;
    sim.robot_history.push_back(sim.robot_pose.position());
    const Vec2 robot_seen = sim.delayed_robot_position();

    const ScenarioConfig& cfg = sim.cfg;
    const double W = cfg.corridor_width;
    const double L = cfg.corridor_length;
    const std::vector<HumanState> snapshot = sim.humans;

    for (auto& h : sim.humans) {
        Vec2 accel = (Vec2{h.dir * h.preferred_speed, 0.0} - h.velocity) * cfg.goal_gain;
        // Oncoming agents ahead get a rightward sidestep bias (right-hand
        // corridor convention); this breaks symmetric-dodge deadlocks.
        auto dodge_bias = [&](const Vec2& other) {
            const Vec2 rel = other - h.position;
            if (rel.norm() > 2.5) return;
            if (rel.x * h.dir <= 0.0) return;  // only agents ahead
            accel.y += -h.dir * cfg.pass_bias;
        };
        for (const auto& other : snapshot) {
            if (other.id == h.id) continue;
            accel += repulsion_from(h.position, other.position, h.radius + other.radius, cfg);
            if (other.dir != h.dir) dodge_bias(other.position);
        }
        accel += repulsion_from(h.position, robot_seen, h.radius + cfg.robot_radius, cfg);
        // Walls as the lines y = 0, y = W; caps as x = 0, x = L.
        const double dy0 = h.position.y, dy1 = W - h.position.y;
        const double dx0 = h.position.x, dx1 = L - h.position.x;
        if (dy0 < cfg.repulsion_range)
            accel.y += std::min(cfg.repulsion_cap, cfg.wall_gain / (dy0 * dy0));
        if (dy1 < cfg.repulsion_range)
            accel.y -= std::min(cfg.repulsion_cap, cfg.wall_gain / (dy1 * dy1));
        if (dx0 < cfg.repulsion_range)
            accel.x += std::min(cfg.repulsion_cap, cfg.wall_gain / (dx0 * dx0));
        if (dx1 < cfg.repulsion_range)
            accel.x -= std::min(cfg.repulsion_cap, cfg.wall_gain / (dx1 * dx1));

        h.velocity += accel * dt;
        const double speed = h.velocity.norm();
        if (speed > h.preferred_speed)
            h.velocity = speed > 1e-12 ? h.velocity * (h.preferred_speed / speed) : Vec2{};

        h.position += h.velocity * dt;
        // Hard interior clamp; kill the velocity component that pushed out.
        const double margin = h.radius;
        if (h.position.y < margin) { h.position.y = margin; h.velocity.y = std::max(0.0, h.velocity.y); }
        if (h.position.y > W - margin) { h.position.y = W - margin; h.velocity.y = std::min(0.0, h.velocity.y); }
        if (h.position.x < margin) { h.position.x = margin; h.velocity.x = std::max(0.0, h.velocity.x); }
        if (h.position.x > L - margin) { h.position.x = L - margin; h.velocity.x = std::min(0.0, h.velocity.x); }
    }

    // Humans leave the hallway at their destination end.
    std::erase_if(sim.humans, [&](const HumanState& h) {
        return (h.dir > 0 && h.position.x >= L - 0.8) || (h.dir < 0 && h.position.x <= 0.8);
    });

    sim.time += dt;
    return sim.detector.feed(sim.time, sim.robot_pose.position(), sim.humans);
}

}  // namespace hallway::sim
