#ifndef HALLWAY_RISK_HPP_
#define HALLWAY_RISK_HPP_

#include <vector>

#include "hallway/dynamics.hpp"
#include "hallway/grid.hpp"
#include "hallway/predict.hpp"

namespace hallway::risk {

struct RiskConfig {
    double alpha_coll{0.0};   // CVaR level for observed agents
    double alpha_peek{0.9};   // CVaR level for the occlusion term
    double epsilon_peek{0.15};// risk budget subtracted before clamping
    double c1{1.0};           // terminal (goal attraction) weight
    double c2{4000.0};        // collision weight
    double c3{120.0};         // occlusion (peek) weight
    double robot_radius{0.2};
    double human_radius{0.2};
    bool distance_losses{false};  // penetration-depth losses instead of indicators
    // Terminal error is floored at this radius: endpoints inside the goal
    // disc cost nothing. 0 reproduces the plain squared distance.
    double goal_tolerance{0.0};

    void validate() const;
};

/// Per-term decomposition of the planner cost. total is the exact sum of the
/// three components.
struct CostBreakdown {
    double terminal{0.0};
    double collision{0.0};
    double occlusion{0.0};
    double total{0.0};
};

/// Empirical CVaR: mean of the worst ceil((1 - alpha) * n) losses.
double cvar(const std::vector<double>& samples, double alpha);

/// Squared terminal error of an endpoint: planar distance to the goal,
/// floored at cfg.goal_tolerance, squared.
double goal_error_sq(const Vec2& endpoint, const Vec2& goal, const RiskConfig& cfg);

/// Per-sample loss against the fan (indicator of any-timestep overlap, or
/// penetration depth when distance_losses is set), aggregated with
/// CVaR_{alpha_coll}. Indicator losses keep the result in [0, 1].
double collision_prob(const dyn::Trajectory& traj, const predict::PredictionFan& fan,
                      const RiskConfig& cfg);

/// Max inflated-costmap value along the trajectory; out-of-bounds poses are
/// lethal.
double static_collision(const dyn::Trajectory& traj, const world::Costmap& costmap);

/// max(0, CVaR_{alpha_peek}(phantom losses) - epsilon_peek); 0 for an empty
/// ensemble.
double occlusion_risk(const dyn::Trajectory& traj, const predict::PhantomEnsemble& phantoms,
                      const RiskConfig& cfg);

CostBreakdown total_cost(const dyn::Trajectory& traj, const Pose2& goal,
                         const world::Costmap& costmap,
                         const std::vector<predict::PredictionFan>& fans,
                         const predict::PhantomEnsemble& phantoms, const RiskConfig& cfg);

/// Assembles the breakdown from already-aggregated pieces (occlusion_value
/// is the clamped occlusion risk). plan() and total_cost() both run through
/// this, so a stored plan cost reproduces bit-exactly when recomputed from
/// its trajectory.
CostBreakdown combine_cost(double goal_dist_sq, double static_cost,
                           const std::vector<double>& fan_probs, double occlusion_value,
                           const RiskConfig& cfg);

}  // namespace hallway::risk

#endif  // HALLWAY_RISK_HPP_
