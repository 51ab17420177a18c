#ifndef HALLWAY_GEOMETRY_HPP_
#define HALLWAY_GEOMETRY_HPP_

#include <cmath>

namespace hallway {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm_sq() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm_sq()); }

    bool operator==(const Vec2&) const = default;
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }
inline double distance_sq(const Vec2& a, const Vec2& b) { return (a - b).norm_sq(); }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    return r <= -kPi ? r + 2.0 * kPi : r;
}

/// Robot pose in the plane. theta is kept normalized to (-pi, pi].
struct Pose2 {
    double x{0.0};
    double y{0.0};
    double theta{0.0};

    Vec2 position() const { return {x, y}; }
    Vec2 heading_vec() const { return {std::cos(theta), std::sin(theta)}; }

    bool operator==(const Pose2&) const = default;
};

/// Unicycle controls: forward speed and turn rate.
struct Twist {
    double v{0.0};
    double omega{0.0};

    bool operator==(const Twist&) const = default;
};

}  // namespace hallway

#endif  // HALLWAY_GEOMETRY_HPP_
