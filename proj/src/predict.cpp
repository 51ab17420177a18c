#include "hallway/predict.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "hallway/rng.hpp"

namespace hallway::predict {

std::vector<AgentTrack> update_tracks(const std::vector<AgentTrack>& tracks,
                                      const std::vector<Observation>& observations, double dt,
                                      const TrackerConfig& cfg) {
    if (dt <= 0.0) throw std::invalid_argument("update_tracks: dt must be > 0");
    std::set<int> seen;
    for (const auto& obs : observations)
        if (!seen.insert(obs.id).second)
            throw std::invalid_argument("update_tracks: duplicate observation id");

    std::map<int, const AgentTrack*> prev;
    for (const auto& t : tracks) prev[t.id] = &t;

    std::vector<AgentTrack> out;
    out.reserve(observations.size());
    for (const auto& obs : observations) {
        auto it = prev.find(obs.id);
        if (it == prev.end()) {
            AgentTrack fresh;
            fresh.id = obs.id;
            fresh.position = obs.position;
            fresh.velocity = {0.0, 0.0};
            fresh.radius = cfg.human_radius;
            fresh.history.push_back({0.0, obs.position});
            out.push_back(std::move(fresh));
            continue;
        }
        AgentTrack t = *it->second;
        const Vec2 raw = (obs.position - t.position) * (1.0 / dt);
        Vec2 vel = raw * cfg.beta + t.velocity * (1.0 - cfg.beta);
        const double speed = vel.norm();
        if (speed > cfg.v_human_max) vel = vel * (cfg.v_human_max / speed);
        t.position = obs.position;
        t.velocity = vel;
        t.history.push_back({t.history.back().t + dt, obs.position});
        if (static_cast<int>(t.history.size()) > cfg.history)
            t.history.erase(t.history.begin(),
                            t.history.begin() + (t.history.size() - cfg.history));
        out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end(),
              [](const AgentTrack& a, const AgentTrack& b) { return a.id < b.id; });
    return out;
}

namespace {

int horizon_steps(double horizon, double dt_sample) {
    if (horizon <= 0.0 || dt_sample <= 0.0)
        throw std::invalid_argument("horizon and dt_sample must be > 0");
    const double ratio = horizon / dt_sample;
    const int n = static_cast<int>(std::lround(ratio));
    if (n < 1 || std::abs(ratio - n) > 1e-9)
        throw std::invalid_argument("horizon must be an integer multiple of dt_sample");
    return n;
}

}  // namespace

PredictionFan predict_fan(const AgentTrack& track, double horizon, double dt_sample,
                          int n_samples, double sigma_v, double sigma_omega,
                          const TrackerConfig& cfg, std::mt19937_64& rng) {
    if (n_samples < 1) throw std::invalid_argument("predict_fan: n_samples must be >= 1");
    const int steps = horizon_steps(horizon, dt_sample);

    PredictionFan fan;
    fan.agent_id = track.id;
    fan.dt_sample = dt_sample;
    fan.samples.reserve(n_samples);

    const double base_speed = track.velocity.norm();
    const bool stationary = base_speed < 1e-6;
    const double base_heading = stationary ? 0.0 : std::atan2(track.velocity.y, track.velocity.x);

    for (int s = 0; s < n_samples; ++s) {
        double speed = std::clamp(normal(rng, base_speed, sigma_v), 0.0, cfg.v_human_max);
        double heading_rate = normal(rng, 0.0, sigma_omega);
        double heading = base_heading;
        if (stationary) heading = wrap_angle(uniform_range(rng, -kPi, kPi));
        if (sigma_v == 0.0 && sigma_omega == 0.0) {
            // Degenerate noise: exact constant-velocity extrapolation.
            speed = base_speed;
            heading_rate = 0.0;
        }
        std::vector<Vec2> pts;
        pts.reserve(steps + 1);
        Vec2 p = track.position;
        pts.push_back(p);
        double th = heading;
        for (int k = 0; k < steps; ++k) {
            p += Vec2{std::cos(th), std::sin(th)} * (speed * dt_sample);
            th += heading_rate * dt_sample;
            pts.push_back(p);
        }
        fan.samples.push_back(std::move(pts));
    }
    return fan;
}

PredictionFan predict_fan(const AgentTrack& track, double horizon, double dt_sample,
                          int n_samples, double sigma_v, double sigma_omega,
                          const TrackerConfig& cfg, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    return predict_fan(track, horizon, dt_sample, n_samples, sigma_v, sigma_omega, cfg, rng);
}

bool heading_into_visible(const world::VisibilityMask& mask, const world::OccupancyGrid& grid,
                          world::CellIndex cell, double heading) {
    const Vec2 start = grid.cell_center(cell.col, cell.row);
    const Vec2 dir{std::cos(heading), std::sin(heading)};
    const double step = grid.resolution * 0.5;
    const int n = static_cast<int>(std::ceil(kPhantomProbeDistance / step));
    for (int i = 1; i <= n; ++i) {
        const double s = std::min(kPhantomProbeDistance, i * step);
        const Vec2 p = start + dir * s;
        const world::CellIndex c = grid.world_to_cell(p);
        if (c == cell) continue;  // the spawn cell itself is exempt
        if (!grid.in_bounds(c.col, c.row)) return false;
        if (grid.at(c.col, c.row) != world::Cell::Free) return false;
        if (!mask.is_visible(c.col, c.row)) return false;
    }
    return true;
}

PhantomEnsemble spawn_phantoms(const std::vector<world::CellIndex>& frontier,
                               const world::VisibilityMask& mask,
                               const world::OccupancyGrid& grid, const Pose2& /*robot_pose*/,
                               double horizon, double dt_sample, int m_samples,
                               double v_human_max, std::mt19937_64& rng) {
    if (m_samples < 0) throw std::invalid_argument("spawn_phantoms: m_samples must be >= 0");
    PhantomEnsemble ensemble;
    ensemble.dt_sample = dt_sample;
    if (frontier.empty() || m_samples == 0) return ensemble;

    const int steps = horizon_steps(horizon, dt_sample);

    // Admissible heading bins per cell, computed lazily and cached for the
    // ensemble (cells repeat across draws).
    std::map<std::pair<int, int>, std::vector<int>> bin_cache;
    auto admissible_bins = [&](world::CellIndex cell) -> const std::vector<int>& {
        auto key = std::make_pair(cell.col, cell.row);
        auto it = bin_cache.find(key);
        if (it != bin_cache.end()) return it->second;
        std::vector<int> bins;
        for (int b = 0; b < kPhantomHeadingBins; ++b) {
            const double heading = wrap_angle(2.0 * kPi * b / kPhantomHeadingBins);
            if (heading_into_visible(mask, grid, cell, heading)) bins.push_back(b);
        }
        return bin_cache.emplace(key, std::move(bins)).first->second;
    };

    constexpr int kMaxCellRedraws = 20;
    ensemble.samples.reserve(m_samples);
    for (int s = 0; s < m_samples; ++s) {
        world::CellIndex cell{};
        const std::vector<int>* bins = nullptr;
        for (int attempt = 0; attempt < kMaxCellRedraws; ++attempt) {
            cell = frontier[uniform_index(rng, frontier.size())];
            const auto& b = admissible_bins(cell);
            if (!b.empty()) { bins = &b; break; }
        }
        if (bins == nullptr) continue;  // fully boxed-in cell cluster; skip draw

        PhantomSample ph;
        ph.spawn_cell = cell;
        ph.speed = uniform_range(rng, 0.0, v_human_max);
        const int bin = (*bins)[uniform_index(rng, bins->size())];
        ph.heading = wrap_angle(2.0 * kPi * bin / kPhantomHeadingBins);

        const Vec2 start = grid.cell_center(cell.col, cell.row);
        const Vec2 vel = Vec2{std::cos(ph.heading), std::sin(ph.heading)} * ph.speed;
        ph.positions.reserve(steps + 1);
        for (int k = 0; k <= steps; ++k) ph.positions.push_back(start + vel * (k * dt_sample));
        ensemble.samples.push_back(std::move(ph));
    }
    return ensemble;
}

PhantomEnsemble spawn_phantoms(const std::vector<world::CellIndex>& frontier,
                               const world::VisibilityMask& mask,
                               const world::OccupancyGrid& grid, const Pose2& robot_pose,
                               double horizon, double dt_sample, int m_samples,
                               double v_human_max, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    return spawn_phantoms(frontier, mask, grid, robot_pose, horizon, dt_sample, m_samples,
                          v_human_max, rng);
}

}  // namespace hallway::predict
