#ifndef HALLWAY_TESTS_ORACLES_HPP_
#define HALLWAY_TESTS_ORACLES_HPP_

// Independent reference implementations used by the test suites. These stay
// deliberately naive (quadratic scans, fine-step integration) so they share
// no code path with the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hallway/dynamics.hpp"
#include "hallway/grid.hpp"

namespace oracles {

using hallway::Pose2;
using hallway::Twist;
using hallway::Vec2;

/// Brute-force distance transform: exact distance from every cell center to
/// the nearest occupied cell center.
inline std::vector<double> distance_transform(const hallway::world::OccupancyGrid& g) {
    std::vector<double> dist(g.cells.size(), std::numeric_limits<double>::infinity());
    for (int row = 0; row < g.height; ++row) {
        for (int col = 0; col < g.width; ++col) {
            double best = std::numeric_limits<double>::infinity();
            for (int orow = 0; orow < g.height; ++orow) {
                for (int ocol = 0; ocol < g.width; ++ocol) {
                    if (g.at(ocol, orow) != hallway::world::Cell::Occupied) continue;
                    const double dx = (col - ocol) * g.resolution;
                    const double dy = (row - orow) * g.resolution;
                    best = std::min(best, std::sqrt(dx * dx + dy * dy));
                }
            }
            dist[static_cast<std::size_t>(row) * g.width + col] = best;
        }
    }
    return dist;
}

inline double linear_decay(double d, double robot_radius, double inflation_radius) {
    if (d <= robot_radius) return 1.0;
    if (d >= inflation_radius) return 0.0;
    return (inflation_radius - d) / (inflation_radius - robot_radius);
}

/// Per-cell visibility oracle: marches the ray at resolution/2 steps and
/// tests cell occupancy and disc membership at every sample point.
inline bool cell_visible_oracle(const hallway::world::OccupancyGrid& g, const Pose2& pose,
                                double sensor_range, int col, int row,
                                const std::vector<hallway::world::AgentDisc>& agents) {
    const Vec2 eye = pose.position();
    const Vec2 target = g.cell_center(col, row);
    if (hallway::distance(eye, target) > sensor_range) return false;
    if (g.at(col, row) == hallway::world::Cell::Occupied) return false;
    const hallway::world::CellIndex eye_cell = g.world_to_cell(eye);
    if (eye_cell.col == col && eye_cell.row == row) {
        for (const auto& a : agents)
            if (hallway::distance(target, a.position) < a.radius) return false;
        return true;
    }
    const Vec2 delta = target - eye;
    const double len = delta.norm();
    const double step = g.resolution * 0.5;
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 1; i <= n; ++i) {
        const double t = std::min(1.0, i * step / len);
        const Vec2 p = eye + delta * t;
        const auto c = g.world_to_cell(p);
        if (!g.in_bounds(c.col, c.row) || g.at(c.col, c.row) == hallway::world::Cell::Occupied)
            return false;
        for (const auto& a : agents)
            if (hallway::distance(p, a.position) < a.radius) return false;
        if (t >= 1.0) break;
    }
    return true;
}

/// RK4 integration of the unicycle with n substeps (reference for the
/// closed-form step).
inline Pose2 integrate_unicycle(const Pose2& start, const Twist& u, double dt, int substeps) {
    auto f = [&](const Pose2& s) {
        return Pose2{u.v * std::cos(s.theta), u.v * std::sin(s.theta), u.omega};
    };
    Pose2 s = start;
    const double h = dt / substeps;
    for (int i = 0; i < substeps; ++i) {
        const Pose2 k1 = f(s);
        const Pose2 s2{s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y, s.theta + 0.5 * h * k1.theta};
        const Pose2 k2 = f(s2);
        const Pose2 s3{s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y, s.theta + 0.5 * h * k2.theta};
        const Pose2 k3 = f(s3);
        const Pose2 s4{s.x + h * k3.x, s.y + h * k3.y, s.theta + h * k3.theta};
        const Pose2 k4 = f(s4);
        s.x += h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
        s.y += h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
        s.theta += h / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
    }
    s.theta = hallway::wrap_angle(s.theta);
    return s;
}

/// Sort-and-average CVaR reference.
inline double cvar_oracle(std::vector<double> losses, double alpha) {
    std::sort(losses.begin(), losses.end(), std::greater<double>());
    const std::size_t n = losses.size();
    std::size_t k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n - 1e-9));
    if (k < 1) k = 1;
    if (k > n) k = n;
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += losses[i];
    return sum / static_cast<double>(k);
}

}  // namespace oracles

#endif  // HALLWAY_TESTS_ORACLES_HPP_
