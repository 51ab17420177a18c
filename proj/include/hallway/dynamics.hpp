#ifndef HALLWAY_DYNAMICS_HPP_
#define HALLWAY_DYNAMICS_HPP_

#include <vector>

#include "hallway/geometry.hpp"

namespace hallway::dyn {

/// Velocity and acceleration envelope of the platform.
struct Limits {
    double v_max{3.0};
    double omega_max{1.5};
    double a_max{2.0};
    double alpha_max{3.0};
};

/// Control-grid shape for primitive generation. n_omega must be odd so the
/// grid contains the straight (omega = 0) primitive.
struct PrimitiveGrid {
    int n_v{4};
    int n_omega{5};
};

/// Short trajectory segment under one constant control, sampled at dt_sample.
/// states[0] is the seed pose, duration = (states.size() - 1) * dt_sample.
struct MotionPrimitive {
    Twist control{};
    double duration{0.0};
    double dt_sample{0.0};
    std::vector<Pose2> states;

    Pose2 endpoint() const { return states.back(); }
};

/// Timestamped (pose, twist) sequence at uniform dt_sample, t_0 = 0.
struct Trajectory {
    double dt_sample{0.0};
    std::vector<Pose2> poses;
    std::vector<Twist> twists;  // control active over the following interval

    double t_final() const { return (poses.size() - 1) * dt_sample; }
    std::size_t size() const { return poses.size(); }
    const Pose2& endpoint() const { return poses.back(); }
};

/// Exact constant-twist propagation: closed-form arc for omega != 0,
/// straight line otherwise.
Pose2 step_unicycle(const Pose2& pose, const Twist& twist, double dt);

/// Cartesian control grid of evenly spaced v in [0, v_max] and omega in
/// [-omega_max, omega_max], filtered to controls reachable from current_twist
/// within the acceleration limits over `duration`. The filtered set always
/// contains its minimum-norm control (the braking primitive); if filtering
/// empties the grid, the grid control closest to (0, 0) is kept.
std::vector<MotionPrimitive> generate_primitives(const Pose2& seed, const Twist& current_twist,
                                                 const Limits& limits, const PrimitiveGrid& grid,
                                                 double duration, double dt_sample);

/// Concatenates primitives into one trajectory, re-seeding each segment at
/// the previous endpoint. Only control/duration of each primitive are used.
Trajectory rollout(const Pose2& seed, const std::vector<MotionPrimitive>& sequence);

/// Grid control closest to zero twist that is reachable from current_twist
/// (used for emergency braking chains).
Twist braking_control(const Twist& current_twist, const Limits& limits, const PrimitiveGrid& grid,
                      double duration);

}  // namespace hallway::dyn

#endif  // HALLWAY_DYNAMICS_HPP_
