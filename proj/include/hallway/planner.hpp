#ifndef HALLWAY_PLANNER_HPP_
#define HALLWAY_PLANNER_HPP_

#include <cstdint>
#include <vector>

#include "hallway/dynamics.hpp"
#include "hallway/predict.hpp"
#include "hallway/risk.hpp"

namespace hallway::planner {

/// Sampling parameters for the prediction layer consumed each replan cycle.
struct PredictionParams {
    int n_samples{64};       // fan samples per tracked agent
    int m_samples{64};       // phantom samples
    double sigma_v{0.2};     // m/s
    double sigma_omega{0.25};// rad/s
};

struct PlannerConfig {
    risk::RiskConfig risk{};
    dyn::Limits limits{};
    dyn::PrimitiveGrid grid{};
    predict::TrackerConfig tracker{};
    PredictionParams prediction{};
    int tree_depth{3};
    double primitive_duration{0.5};  // s
    double dt_sample{0.1};           // s
    double replan_period{0.2};       // s, <= primitive_duration
    double goal_tolerance{0.5};      // m
    double sensor_range{10.0};       // m
    double inflation_radius{0.45};   // m, costmap decay reach
    bool peek_enabled{true};
    double c3_block_factor{1e4};     // c3 multiplier when peeking is off
    std::uint64_t rng_seed{1};

    double horizon() const { return tree_depth * primitive_duration; }
    int steps_per_primitive() const;
    int horizon_steps() const { return tree_depth * steps_per_primitive(); }

    /// Risk weights as the search sees them: c3 is scaled by
    /// c3_block_factor when peeking is disabled.
    risk::RiskConfig effective_risk() const;

    void validate() const;
};

struct Plan {
    std::vector<dyn::MotionPrimitive> sequence;
    dyn::Trajectory trajectory;
    risk::CostBreakdown cost;
    long candidate_count{0};
    bool emergency_stop{false};

    Twist first_control() const {
        return sequence.empty() ? Twist{} : sequence.front().control;
    }
};

/// Exhaustive depth-first search over primitive sequences up to tree_depth.
/// Branches whose partial static collision reaches 1 are pruned; the
/// minimum-total-cost complete candidate wins, ties broken by lower sum of
/// |omega| and then by enumeration order. If every branch is lethal the
/// returned plan is the pure braking sequence flagged emergency_stop.
Plan plan(const Pose2& pose, const Twist& twist, const Pose2& goal,
          const world::Costmap& costmap, const std::vector<predict::PredictionFan>& fans,
          const predict::PhantomEnsemble& phantoms, const PlannerConfig& cfg);

}  // namespace hallway::planner

#endif  // HALLWAY_PLANNER_HPP_
