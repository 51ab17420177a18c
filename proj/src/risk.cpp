#include "hallway/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hallway::risk {

void RiskConfig::validate() const {
    if (alpha_coll < 0.0 || alpha_coll >= 1.0 || alpha_peek < 0.0 || alpha_peek >= 1.0)
        throw std::invalid_argument("risk: CVaR levels must lie in [0, 1)");
    if (epsilon_peek < 0.0) throw std::invalid_argument("risk: epsilon_peek must be >= 0");
    if (c1 < 0.0 || c2 < 0.0 || c3 < 0.0)
        throw std::invalid_argument("risk: cost weights must be >= 0");
    if (robot_radius <= 0.0 || human_radius <= 0.0)
        throw std::invalid_argument("risk: radii must be > 0");
}

double cvar(const std::vector<double>& samples, double alpha) {
    if (samples.empty()) throw std::invalid_argument("cvar: empty sample set");
    if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("cvar: alpha must be in [0, 1)");
    const std::size_t n = samples.size();
    // Small slack keeps ceil from spilling over on inexact (1-alpha)*n.
    const double raw = (1.0 - alpha) * static_cast<double>(n);
    std::size_t k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    k = std::clamp<std::size_t>(k, 1, n);

    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += sorted[i];
    return sum / static_cast<double>(k);
}

double goal_error_sq(const Vec2& endpoint, const Vec2& goal, const RiskConfig& cfg) {
    const double err = std::max(0.0, distance(endpoint, goal) - cfg.goal_tolerance);
    return err * err;
}

namespace {

// Loss of one predicted trajectory against the robot trajectory: indicator
// of any-timestep disc overlap, or worst penetration depth.
double sample_loss(const dyn::Trajectory& traj, const std::vector<Vec2>& sample,
                   double contact_dist, bool distance_losses) {
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.poses.size(); ++k) {
        const double d = distance(traj.poses[k].position(), sample[k]);
        if (distance_losses) {
            worst = std::max(worst, std::max(0.0, contact_dist - d));
        } else if (d - contact_dist < 0.0) {
            return 1.0;
        }
    }
    return distance_losses ? worst : 0.0;
}

void check_alignment(const dyn::Trajectory& traj, double dt_sample, std::size_t sample_len,
                     const char* what) {
    if (traj.dt_sample != dt_sample || traj.poses.size() != sample_len)
        throw std::invalid_argument(std::string(what) + ": trajectory/prediction horizon mismatch");
}

}  // namespace

double collision_prob(const dyn::Trajectory& traj, const predict::PredictionFan& fan,
                      const RiskConfig& cfg) {
    if (fan.samples.empty()) throw std::invalid_argument("collision_prob: empty fan");
    check_alignment(traj, fan.dt_sample, fan.samples.front().size(), "collision_prob");
    const double contact = cfg.robot_radius + cfg.human_radius;
    std::vector<double> losses;
    losses.reserve(fan.samples.size());
    for (const auto& s : fan.samples)
        losses.push_back(sample_loss(traj, s, contact, cfg.distance_losses));
    return cvar(losses, cfg.alpha_coll);
}

double static_collision(const dyn::Trajectory& traj, const world::Costmap& costmap) {
    double worst = 0.0;
    for (const auto& pose : traj.poses) {
        worst = std::max(worst, costmap.cost_at(pose.position()));
        if (worst >= 1.0) return 1.0;
    }
    return worst;
}

double occlusion_risk(const dyn::Trajectory& traj, const predict::PhantomEnsemble& phantoms,
                      const RiskConfig& cfg) {
    if (phantoms.empty()) return 0.0;
    check_alignment(traj, phantoms.dt_sample, phantoms.samples.front().positions.size(),
                    "occlusion_risk");
    const double contact = cfg.robot_radius + cfg.human_radius;
    std::vector<double> losses;
    losses.reserve(phantoms.samples.size());
    for (const auto& ph : phantoms.samples)
        losses.push_back(sample_loss(traj, ph.positions, contact, cfg.distance_losses));
    return std::max(0.0, cvar(losses, cfg.alpha_peek) - cfg.epsilon_peek);
}

CostBreakdown combine_cost(double goal_dist_sq, double static_cost,
                           const std::vector<double>& fan_probs, double occlusion_value,
                           const RiskConfig& cfg) {
    CostBreakdown out;
    out.terminal = cfg.c1 * goal_dist_sq;
    double p = static_cost;
    for (double fp : fan_probs) p += fp;
    out.collision = cfg.c2 * p;
    out.occlusion = cfg.c3 * occlusion_value;
    out.total = out.terminal + out.collision + out.occlusion;
    return out;
}

CostBreakdown total_cost(const dyn::Trajectory& traj, const Pose2& goal,
                         const world::Costmap& costmap,
                         const std::vector<predict::PredictionFan>& fans,
                         const predict::PhantomEnsemble& phantoms, const RiskConfig& cfg) {
    std::vector<double> fan_probs;
    fan_probs.reserve(fans.size());
    for (const auto& fan : fans) fan_probs.push_back(collision_prob(traj, fan, cfg));
    return combine_cost(goal_error_sq(traj.endpoint().position(), goal.position(), cfg),
                        static_collision(traj, costmap), fan_probs,
                        occlusion_risk(traj, phantoms, cfg), cfg);
}

}  // namespace hallway::risk
