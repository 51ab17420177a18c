#ifndef HALLWAY_METRICS_HPP_
#define HALLWAY_METRICS_HPP_

#include <cstdint>
#include <limits>
#include <string>

namespace hallway::bench {

enum class Outcome { Goal, Collision, Timeout };

const char* to_string(Outcome o);

/// Measured results of one episode. time_to_goal is +inf and avg_speed 0
/// unless the goal was reached.
struct EpisodeMetrics {
    Outcome outcome{Outcome::Timeout};
    double time_to_goal{std::numeric_limits<double>::infinity()};
    double avg_speed{0.0};
    double path_length{0.0};
    int path_changes{0};
    int ps_violations{0};
    int collisions{0};
    std::uint64_t scenario_seed{0};
    std::uint64_t planner_seed{0};
};

}  // namespace hallway::bench

#endif  // HALLWAY_METRICS_HPP_
