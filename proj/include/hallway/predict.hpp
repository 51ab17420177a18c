#ifndef HALLWAY_PREDICT_HPP_
#define HALLWAY_PREDICT_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "hallway/geometry.hpp"
#include "hallway/grid.hpp"

namespace hallway::predict {

struct TrackerConfig {
    double beta{0.5};          // velocity smoothing factor
    int history{10};           // retained positions per track
    double v_human_max{3.5};   // m/s, clamp for estimates and samples
    double human_radius{0.2};  // m
};

struct TimedPosition {
    double t{0.0};
    Vec2 position{};
};

/// One tracked agent. Velocity is an exponentially smoothed finite
/// difference of observed positions.
struct AgentTrack {
    int id{0};
    Vec2 position{};
    Vec2 velocity{};
    double radius{0.2};
    std::vector<TimedPosition> history;  // last H observations, increasing t
};

/// Sampled future positions of one tracked agent over the planning horizon.
/// All samples share the horizon and dt_sample; each has weight 1/N.
struct PredictionFan {
    int agent_id{0};
    double dt_sample{0.0};
    std::vector<std::vector<Vec2>> samples;  // samples[i][k] = position at k * dt_sample

    std::size_t size() const { return samples.size(); }
    double horizon() const {
        return samples.empty() ? 0.0 : (samples.front().size() - 1) * dt_sample;
    }
};

struct PhantomSample {
    world::CellIndex spawn_cell{};
    double heading{0.0};
    double speed{0.0};
    std::vector<Vec2> positions;  // positions[k] at k * dt_sample
};

/// Hypothetical humans entering from the frontier between observed and
/// unknown space; straight constant-velocity trajectories.
struct PhantomEnsemble {
    double dt_sample{0.0};
    std::vector<PhantomSample> samples;

    bool empty() const { return samples.empty(); }
    std::size_t size() const { return samples.size(); }
};

struct Observation {
    int id{0};
    Vec2 position{};
};

/// Advances tracks with one observation frame. Unobserved tracks are dropped
/// (occluded agents are re-captured by the phantom ensemble); new ids start
/// with zero velocity.
std::vector<AgentTrack> update_tracks(const std::vector<AgentTrack>& tracks,
                                      const std::vector<Observation>& observations, double dt,
                                      const TrackerConfig& cfg);

/// Constant-velocity fan: per sample, speed ~ N(|velocity|, sigma_v) clamped
/// to [0, v_human_max] and a constant heading rate ~ N(0, sigma_omega).
/// Draw order per sample: speed, heading rate, then (only for a near-zero
/// velocity track) a uniform heading.
PredictionFan predict_fan(const AgentTrack& track, double horizon, double dt_sample,
                          int n_samples, double sigma_v, double sigma_omega,
                          const TrackerConfig& cfg, std::mt19937_64& rng);
PredictionFan predict_fan(const AgentTrack& track, double horizon, double dt_sample,
                          int n_samples, double sigma_v, double sigma_omega,
                          const TrackerConfig& cfg, std::uint64_t rng_seed);

/// Number of heading bins tested when sampling phantom directions.
inline constexpr int kPhantomHeadingBins = 72;
/// Travel distance a phantom heading must keep inside visible free space.
inline constexpr double kPhantomProbeDistance = 1.0;

/// True when the first kPhantomProbeDistance of travel from the cell center
/// stays in Visible Free cells (samples inside the spawn cell are exempt).
bool heading_into_visible(const world::VisibilityMask& mask, const world::OccupancyGrid& grid,
                          world::CellIndex cell, double heading);

/// Uniform draws over (frontier cell, speed in [0, v_human_max], admissible
/// heading bin). Cells with no admissible heading are redrawn a bounded
/// number of times, so the ensemble may come out smaller than m_samples.
PhantomEnsemble spawn_phantoms(const std::vector<world::CellIndex>& frontier,
                               const world::VisibilityMask& mask,
                               const world::OccupancyGrid& grid, const Pose2& robot_pose,
                               double horizon, double dt_sample, int m_samples,
                               double v_human_max, std::mt19937_64& rng);
PhantomEnsemble spawn_phantoms(const std::vector<world::CellIndex>& frontier,
                               const world::VisibilityMask& mask,
                               const world::OccupancyGrid& grid, const Pose2& robot_pose,
                               double horizon, double dt_sample, int m_samples,
                               double v_human_max, std::uint64_t rng_seed);

}  // namespace hallway::predict

#endif  // HALLWAY_PREDICT_HPP_
