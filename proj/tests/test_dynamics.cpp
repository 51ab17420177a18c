#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hallway/dynamics.hpp"
#include "hallway/rng.hpp"
#include "oracles.hpp"

using namespace hallway;
using namespace hallway::dyn;

TEST_CASE("step_unicycle: straight, pure rotation, quarter arc") {
    const Pose2 straight = step_unicycle({0, 0, 0}, {1.0, 0.0}, 1.0);
    CHECK(straight.x == doctest::Approx(1.0));
    CHECK(straight.y == doctest::Approx(0.0));
    CHECK(straight.theta == doctest::Approx(0.0));

    const Pose2 spin = step_unicycle({0, 0, 0}, {0.0, 1.0}, kPi);
    CHECK(spin.x == doctest::Approx(0.0));
    CHECK(spin.y == doctest::Approx(0.0));
    CHECK(spin.theta == doctest::Approx(kPi));  // normalized to (-pi, pi]

    const Pose2 arc = step_unicycle({0, 0, 0}, {1.0, 1.0}, kPi / 2);
    CHECK(arc.x == doctest::Approx(1.0));
    CHECK(arc.y == doctest::Approx(1.0));
    CHECK(arc.theta == doctest::Approx(kPi / 2));
}

TEST_CASE("step_unicycle: matches fine-step integration over the control box") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Pose2 start{uniform_range(rng, -5, 5), uniform_range(rng, -5, 5),
                          uniform_range(rng, -kPi, kPi)};
        const Twist u{uniform_range(rng, -3, 3), uniform_range(rng, -2, 2)};
        const double dt = uniform_range(rng, 0.01, 1.0);
        const Pose2 got = step_unicycle(start, u, dt);
        const Pose2 ref = oracles::integrate_unicycle(start, u, dt, 10000);
        CHECK(got.x == doctest::Approx(ref.x).epsilon(0).scale(1e-6));
        CHECK(got.y == doctest::Approx(ref.y).epsilon(0).scale(1e-6));
        CHECK(std::abs(wrap_angle(got.theta - ref.theta)) < 1e-6);
    }
}

TEST_CASE("step_unicycle: theta stays normalized") {
    Pose2 p{0, 0, 3.0};
    for (int i = 0; i < 50; ++i) {
        p = step_unicycle(p, {1.0, 1.4}, 0.7);
        CHECK(p.theta > -kPi);
        CHECK(p.theta <= kPi);
    }
}

TEST_CASE("generate_primitives: full grid when accelerations are unconstrained") {
    const Limits lim{3.0, 1.5, 100.0, 100.0};
    const auto prims = generate_primitives({}, {0, 0}, lim, {4, 5}, 0.5, 0.1);
    CHECK(prims.size() == 20);
    bool has_stop = false, has_straight_fast = false;
    for (const auto& p : prims) {
        CHECK(p.states.size() == 6);
        CHECK(p.states.front() == Pose2{});
        CHECK(std::abs(p.control.v) <= lim.v_max);
        CHECK(std::abs(p.control.omega) <= lim.omega_max);
        if (p.control == Twist{0, 0}) has_stop = true;
        if (p.control == Twist{3, 0}) has_straight_fast = true;
    }
    CHECK(has_stop);
    CHECK(has_straight_fast);
}

TEST_CASE("generate_primitives: reachability filter keeps the braking primitive") {
    const Limits lim{3.0, 1.5, 0.4, 100.0};  // dv over 0.5 s = 0.2
    const auto prims = generate_primitives({}, {0, 0}, lim, {4, 5}, 0.5, 0.1);
    for (const auto& p : prims) CHECK(p.control.v == 0.0);  // v=1 unreachable
    bool has_stop = false;
    for (const auto& p : prims)
        if (p.control == Twist{0, 0}) has_stop = true;
    CHECK(has_stop);

    // From full speed with a tiny envelope nothing on the grid is reachable;
    // the closest-to-zero grid control is still returned.
    const Limits tiny{3.0, 1.5, 0.1, 0.1};
    const auto fallback = generate_primitives({}, {1.4, 0.1}, tiny, {4, 5}, 0.5, 0.1);
    REQUIRE(fallback.size() == 1);
    CHECK(fallback.front().control == Twist{0, 0});
}

TEST_CASE("generate_primitives: endpoints stay within v_max * duration of the seed") {
    std::mt19937_64 rng(11);
    const Limits lim{3.0, 1.5, 2.0, 3.0};
    for (int trial = 0; trial < 20; ++trial) {
        const Pose2 seed{uniform_range(rng, -2, 2), uniform_range(rng, -2, 2),
                         uniform_range(rng, -kPi, kPi)};
        const Twist current{uniform_range(rng, 0, 3), uniform_range(rng, -1.5, 1.5)};
        const auto prims = generate_primitives(seed, current, lim, {4, 5}, 0.5, 0.1);
        for (const auto& p : prims) {
            CHECK(std::abs(p.control.v - current.v) <= lim.a_max * 0.5 + 1e-9);
            CHECK(std::abs(p.control.omega - current.omega) <= lim.alpha_max * 0.5 + 1e-9);
            CHECK(distance(p.endpoint().position(), seed.position()) <=
                  lim.v_max * 0.5 + 1e-9);
        }
    }
}

TEST_CASE("generate_primitives: invalid configurations are rejected") {
    CHECK_THROWS_AS(generate_primitives({}, {}, {-1, 1.5, 2, 3}, {4, 5}, 0.5, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_primitives({}, {}, {3, 1.5, 2, 3}, {1, 5}, 0.5, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_primitives({}, {}, {3, 1.5, 2, 3}, {4, 4}, 0.5, 0.1),
                    std::invalid_argument);  // even n_omega has no omega = 0
    CHECK_THROWS_AS(generate_primitives({}, {}, {3, 1.5, 2, 3}, {4, 5}, 0.5, 0.3),
                    std::invalid_argument);  // duration not a multiple of dt
}

TEST_CASE("rollout: identity, composition and oracle equivalence") {
    const Limits lim{3.0, 1.5, 100.0, 100.0};
    const auto prims = generate_primitives({}, {1, 0}, lim, {4, 5}, 1.0, 0.1);
    const MotionPrimitive* straight = nullptr;
    const MotionPrimitive* left = nullptr;
    for (const auto& p : prims) {
        if (p.control == Twist{1, 0}) straight = &p;
        if (p.control == Twist{1, 1.5}) left = &p;
    }
    REQUIRE(straight != nullptr);
    REQUIRE(left != nullptr);

    const auto single = rollout({}, {*straight});
    REQUIRE(single.poses.size() == straight->states.size());
    for (std::size_t i = 0; i < single.poses.size(); ++i)
        CHECK(single.poses[i] == straight->states[i]);

    const auto twice = rollout({}, {*straight, *straight});
    CHECK(twice.endpoint().x == doctest::Approx(2.0));
    CHECK(twice.endpoint().y == doctest::Approx(0.0));
    CHECK(twice.poses.size() == 21);
    CHECK(twice.t_final() == doctest::Approx(2.0));

    const auto turny = rollout({}, {*straight, *left});
    Pose2 ref{};
    for (int i = 0; i < 10; ++i) ref = oracles::integrate_unicycle(ref, {1, 0}, 0.1, 1000);
    for (int i = 0; i < 10; ++i) ref = oracles::integrate_unicycle(ref, {1, 1.5}, 0.1, 1000);
    CHECK(turny.endpoint().x == doctest::Approx(ref.x).epsilon(0).scale(1e-9));
    CHECK(turny.endpoint().y == doctest::Approx(ref.y).epsilon(0).scale(1e-9));

    CHECK_THROWS_AS(rollout({}, {}), std::invalid_argument);
}

TEST_CASE("rollout: rotational symmetry and omega mirroring") {
    std::mt19937_64 rng(5);
    const Limits lim{3.0, 1.5, 2.0, 3.0};
    for (int trial = 0; trial < 20; ++trial) {
        const double v = uniform_range(rng, 0, 3);
        const double w = uniform_range(rng, -1.5, 1.5);
        const double phi = uniform_range(rng, -kPi, kPi);
        const auto prims = generate_primitives({}, {v, w}, lim, {4, 5}, 0.5, 0.1);
        const auto& prim = prims.front();

        // Rotating the seed rotates the endpoint about the seed.
        const auto base = rollout({}, {prim}).endpoint();
        const auto rot = rollout({0, 0, phi}, {prim}).endpoint();
        const double c = std::cos(phi), s = std::sin(phi);
        CHECK(rot.x == doctest::Approx(c * base.x - s * base.y).epsilon(0).scale(1e-12));
        CHECK(rot.y == doctest::Approx(s * base.x + c * base.y).epsilon(0).scale(1e-12));
        CHECK(std::abs(wrap_angle(rot.theta - phi - base.theta)) < 1e-12);

        // Mirroring omega mirrors the trajectory across the heading axis.
        MotionPrimitive mirrored = prim;
        mirrored.control.omega = -prim.control.omega;
        const auto traj = rollout({}, {prim});
        const auto mtraj = rollout({}, {mirrored});
        for (std::size_t i = 0; i < traj.poses.size(); ++i) {
            CHECK(mtraj.poses[i].x == doctest::Approx(traj.poses[i].x).epsilon(0).scale(1e-12));
            CHECK(mtraj.poses[i].y == doctest::Approx(-traj.poses[i].y).epsilon(0).scale(1e-12));
        }
    }
}

TEST_CASE("braking_control: decelerates along the grid toward zero") {
    const Limits lim{3.0, 1.5, 2.0, 3.0};
    CHECK(braking_control({3.0, 0.0}, lim, {4, 5}, 0.5) == Twist{2.0, 0.0});
    CHECK(braking_control({2.0, 0.75}, lim, {4, 5}, 0.5) == Twist{1.0, 0.0});
    CHECK(braking_control({0.0, 0.0}, lim, {4, 5}, 0.5) == Twist{0.0, 0.0});
}
