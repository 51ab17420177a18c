#include "hallway/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace hallway::dyn {

Pose2 step_unicycle(const Pose2& pose, const Twist& twist, double dt) {
    Pose2 next = pose;
    // Below this the arc form loses precision to cancellation; the straight
    // form is within ~v*dt*1e-8 of exact there.
    if (std::abs(twist.omega) * dt > 1e-8) {
        const double theta1 = pose.theta + twist.omega * dt;
        const double r = twist.v / twist.omega;
        next.x += r * (std::sin(theta1) - std::sin(pose.theta));
        next.y += r * (std::cos(pose.theta) - std::cos(theta1));
        next.theta = wrap_angle(theta1);
    } else {
        next.x += twist.v * std::cos(pose.theta) * dt;
        next.y += twist.v * std::sin(pose.theta) * dt;
        next.theta = wrap_angle(pose.theta + twist.omega * dt);
    }
    return next;
}

namespace {

int sample_count(double duration, double dt_sample) {
    if (duration <= 0.0 || dt_sample <= 0.0)
        throw std::invalid_argument("primitive duration and dt_sample must be > 0");
    const double ratio = duration / dt_sample;
    const int n = static_cast<int>(std::lround(ratio));
    if (n < 1 || std::abs(ratio - n) > 1e-9)
        throw std::invalid_argument("duration must be an integer multiple of dt_sample");
    return n;
}

MotionPrimitive integrate_primitive(const Pose2& seed, const Twist& control, double duration,
                                    double dt_sample) {
    const int n = sample_count(duration, dt_sample);
    MotionPrimitive prim;
    prim.control = control;
    prim.duration = duration;
    prim.dt_sample = dt_sample;
    prim.states.reserve(n + 1);
    prim.states.push_back(seed);
    for (int i = 0; i < n; ++i)
        prim.states.push_back(step_unicycle(prim.states.back(), control, dt_sample));
    return prim;
}

}  // namespace

std::vector<MotionPrimitive> generate_primitives(const Pose2& seed, const Twist& current_twist,
                                                 const Limits& limits, const PrimitiveGrid& grid,
                                                 double duration, double dt_sample) {
    if (limits.v_max <= 0.0 || limits.omega_max <= 0.0)
        throw std::invalid_argument("generate_primitives: non-positive velocity limits");
    if (grid.n_v < 2 || grid.n_omega < 3)
        throw std::invalid_argument("generate_primitives: need n_v >= 2 and n_omega >= 3");
    if (grid.n_omega % 2 == 0)
        throw std::invalid_argument("generate_primitives: n_omega must be odd (omega = 0 member)");

    const double dv_reach = limits.a_max * duration;
    const double dw_reach = limits.alpha_max * duration;

    // Enumerated fastest-first: under the planner's cost-tie rule the
    // enumeration index breaks exact ties, and motion should win them.
    std::vector<Twist> controls;
    controls.reserve(static_cast<std::size_t>(grid.n_v) * grid.n_omega);
    Twist closest_zero{};  // over the full grid
    double closest_norm = -1.0;
    for (int iv = grid.n_v - 1; iv >= 0; --iv) {
        const double v = limits.v_max * iv / (grid.n_v - 1);
        for (int iw = 0; iw < grid.n_omega; ++iw) {
            const double w = -limits.omega_max + 2.0 * limits.omega_max * iw / (grid.n_omega - 1);
            const double norm = v * v + w * w;
            if (closest_norm < 0.0 || norm < closest_norm) {
                closest_norm = norm;
                closest_zero = {v, w};
            }
            if (std::abs(v - current_twist.v) <= dv_reach + 1e-12 &&
                std::abs(w - current_twist.omega) <= dw_reach + 1e-12)
                controls.push_back({v, w});
        }
    }
    if (controls.empty()) controls.push_back(closest_zero);

    std::vector<MotionPrimitive> prims;
    prims.reserve(controls.size());
    for (const Twist& c : controls)
        prims.push_back(integrate_primitive(seed, c, duration, dt_sample));
    return prims;
}

Trajectory rollout(const Pose2& seed, const std::vector<MotionPrimitive>& sequence) {
    if (sequence.empty()) throw std::invalid_argument("rollout: empty primitive sequence");
    const double dt = sequence.front().dt_sample;
    for (const auto& p : sequence)
        if (p.dt_sample != dt) throw std::invalid_argument("rollout: mixed dt_sample");

    Trajectory traj;
    traj.dt_sample = dt;
    traj.poses.push_back(seed);
    traj.twists.push_back(sequence.front().control);
    for (const auto& prim : sequence) {
        const int n = sample_count(prim.duration, dt);
        for (int i = 0; i < n; ++i) {
            traj.poses.push_back(step_unicycle(traj.poses.back(), prim.control, dt));
            traj.twists.push_back(prim.control);
        }
    }
    return traj;
}

Twist braking_control(const Twist& current_twist, const Limits& limits, const PrimitiveGrid& grid,
                      double duration) {
    const auto prims = generate_primitives({}, current_twist, limits, grid, duration,
                                           duration);  // single-sample integration is enough
    const MotionPrimitive* best = &prims.front();
    double best_norm = best->control.v * best->control.v + best->control.omega * best->control.omega;
    for (const auto& p : prims) {
        const double n = p.control.v * p.control.v + p.control.omega * p.control.omega;
        if (n < best_norm) {
            best_norm = n;
            best = &p;
        }
    }
    return best->control;
}

}  // namespace hallway::dyn
