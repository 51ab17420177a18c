#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hallway/grid.hpp"
#include "hallway/rng.hpp"
#include "oracles.hpp"

using namespace hallway;
using namespace hallway::world;

namespace {

OccupancyGrid random_grid(std::mt19937_64& rng, int w, int h, double occupied_frac) {
    OccupancyGrid g = make_grid(0.1, w, h);
    for (auto& c : g.cells)
        if (uniform01(rng) < occupied_frac) c = Cell::Occupied;
    return g;
}

}  // namespace

TEST_CASE("inflate: all-free grid gives an all-zero costmap") {
    const auto g = make_grid(0.1, 20, 15);
    const auto cm = inflate(g, 0.2, 0.6);
    for (double c : cm.cost) CHECK(c == 0.0);
}

TEST_CASE("inflate: lethal band covers the 4-neighborhood at one-cell radius") {
    auto g = make_grid(0.1, 11, 11);
    g.set(5, 5, Cell::Occupied);
    const auto cm = inflate(g, 0.1, 0.3);
    CHECK(cm.at(5, 5) == 1.0);
    CHECK(cm.at(4, 5) == 1.0);
    CHECK(cm.at(6, 5) == 1.0);
    CHECK(cm.at(5, 4) == 1.0);
    CHECK(cm.at(5, 6) == 1.0);
    CHECK(cm.at(7, 5) < 1.0);
}

TEST_CASE("inflate: linear decay matches the brute-force distance transform") {
    auto g = make_grid(0.1, 15, 15);
    g.set(7, 7, Cell::Occupied);
    const auto cm = inflate(g, 0.2, 0.6);
    // Cell 0.4 m away along the axis sits halfway through the decay band.
    CHECK(cm.at(11, 7) == doctest::Approx(0.5).epsilon(1e-12));

    const auto dist = oracles::distance_transform(g);
    for (std::size_t i = 0; i < dist.size(); ++i)
        CHECK(cm.cost[i] == doctest::Approx(oracles::linear_decay(dist[i], 0.2, 0.6))
                                .epsilon(1e-12));
}

TEST_CASE("inflate: random grids match the distance-transform oracle") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = random_grid(rng, 12, 9, 0.12);
        const double rr = 0.1 + 0.2 * uniform01(rng);
        const double ir = rr + 0.4 * uniform01(rng);
        const auto cm = inflate(g, rr, ir);
        REQUIRE(cm.width == g.width);
        REQUIRE(cm.height == g.height);
        REQUIRE(cm.resolution == g.resolution);
        const auto dist = oracles::distance_transform(g);
        for (std::size_t i = 0; i < dist.size(); ++i)
            CHECK(cm.cost[i] ==
                  doctest::Approx(oracles::linear_decay(dist[i], rr, ir)).epsilon(1e-12));
    }
}

TEST_CASE("inflate: bad inputs are rejected") {
    auto g = make_grid(0.1, 4, 4);
    CHECK_THROWS_AS(inflate(g, 0.5, 0.2), std::invalid_argument);
    g.resolution = 0.0;
    CHECK_THROWS_AS(inflate(g, 0.1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-0.1, 4, 4), std::invalid_argument);
}

TEST_CASE("visible_region: empty grid equals the range disc exactly") {
    const auto g = make_grid(0.1, 30, 30);
    const Pose2 pose{1.5, 1.5, 0.0};
    const double range = 0.9;
    const auto mask = visible_region(g, pose, range, {});
    for (int row = 0; row < g.height; ++row)
        for (int col = 0; col < g.width; ++col) {
            const bool in_disc = distance(g.cell_center(col, row), pose.position()) <= range;
            CHECK(mask.is_visible(col, row) == in_disc);
        }
}

TEST_CASE("visible_region: an agent disc casts a shadow cone") {
    const auto g = make_grid(0.1, 40, 20);
    const Pose2 pose{0.55, 1.05, 0.0};
    const std::vector<AgentDisc> agents{{{1.55, 1.05}, 0.25}};
    const auto mask = visible_region(g, pose, 10.0, agents);

    // Directly behind the disc: unknown. Off-axis at the same depth: visible.
    CHECK_FALSE(mask.visible_at({2.55, 1.05}));
    CHECK_FALSE(mask.visible_at({3.05, 1.05}));
    CHECK(mask.visible_at({2.55, 1.95}));
    CHECK(mask.visible_at({0.95, 1.05}));  // in front of the disc

    for (int row = 0; row < g.height; ++row)
        for (int col = 0; col < g.width; ++col)
            CHECK(mask.is_visible(col, row) ==
                  oracles::cell_visible_oracle(g, pose, 10.0, col, row, agents));
}

TEST_CASE("visible_region: a wall blocks everything behind it") {
    auto g = make_grid(0.1, 30, 10);
    for (int row = 0; row < g.height; ++row) g.set(15, row, Cell::Occupied);
    const Pose2 pose{1.45, 0.55, 0.0};
    const auto mask = visible_region(g, pose, 10.0, {});
    for (int row = 0; row < g.height; ++row)
        for (int col = 16; col < g.width; ++col) CHECK_FALSE(mask.is_visible(col, row));
}

TEST_CASE("visible_region: pose inside an occupied cell is rejected") {
    auto g = make_grid(0.1, 10, 10);
    g.set(5, 5, Cell::Occupied);
    CHECK_THROWS_AS(visible_region(g, Pose2{0.55, 0.55, 0}, 5.0, {}), std::invalid_argument);
    CHECK_NOTHROW(visible_region(g, Pose2{0.15, 0.15, 0}, 5.0, {}));
    g.set(1, 1, Cell::Occupied);
    CHECK_THROWS_AS(visible_region(g, Pose2{0.15, 0.15, 0}, 5.0, {}), std::invalid_argument);
}

TEST_CASE("visible_region: growing the sensor range never hides a cell") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        auto g = random_grid(rng, 20, 14, 0.08);
        g.set(2, 2, Cell::Free);
        const Pose2 pose{0.25, 0.25, 0.0};
        std::vector<AgentDisc> agents{{{1.0 + uniform01(rng), 0.7}, 0.2}};
        const auto small = visible_region(g, pose, 1.0, agents);
        const auto big = visible_region(g, pose, 2.5, agents);
        for (int row = 0; row < g.height; ++row)
            for (int col = 0; col < g.width; ++col)
                if (small.is_visible(col, row)) CHECK(big.is_visible(col, row));
    }
}

TEST_CASE("frontier_cells: fully visible mask yields nothing") {
    const auto g = make_grid(0.1, 12, 12);
    const auto mask = visible_region(g, Pose2{0.6, 0.6, 0}, 100.0, {});
    CHECK(frontier_cells(mask, g).empty());
}

TEST_CASE("frontier_cells: matches the exhaustive adjacency oracle") {
    const auto check_against_oracle = [](const OccupancyGrid& g, const VisibilityMask& mask) {
        const auto got = frontier_cells(mask, g);
        std::vector<CellIndex> expect;
        for (int row = 0; row < g.height; ++row)
            for (int col = 0; col < g.width; ++col) {
                if (g.at(col, row) != Cell::Free || mask.is_visible(col, row)) continue;
                const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nc = col + dx[k], nr = row + dy[k];
                    if (g.in_bounds(nc, nr) && g.at(nc, nr) == Cell::Free &&
                        mask.is_visible(nc, nr)) {
                        expect.push_back({col, row});
                        break;
                    }
                }
            }
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expect[i]);
        // Returned cells are sorted by (row, col).
        for (std::size_t i = 1; i < got.size(); ++i)
            CHECK((got[i].row > got[i - 1].row ||
                   (got[i].row == got[i - 1].row && got[i].col > got[i - 1].col)));
    };

    // Occluding agent in an open room: band along the shadow boundary.
    const auto g = make_grid(0.1, 40, 20);
    const Pose2 pose{0.55, 1.05, 0.0};
    const std::vector<AgentDisc> agents{{{1.55, 1.05}, 0.25}};
    const auto mask = visible_region(g, pose, 10.0, agents);
    CHECK_FALSE(frontier_cells(mask, g).empty());
    check_against_oracle(g, mask);

    // Range limit shorter than the room: frontier arc at the limit.
    const auto far_mask = visible_region(g, pose, 1.5, {});
    CHECK_FALSE(frontier_cells(far_mask, g).empty());
    check_against_oracle(g, far_mask);
}

TEST_CASE("frontier_cells: geometry mismatch is rejected") {
    const auto g = make_grid(0.1, 12, 12);
    const auto g2 = make_grid(0.1, 13, 12);
    const auto mask = visible_region(g, Pose2{0.6, 0.6, 0}, 2.0, {});
    CHECK_THROWS_AS(frontier_cells(mask, g2), std::invalid_argument);
}

TEST_CASE("map text round-trips bit-exactly") {
    auto g = make_grid(0.1, 7, 4, {-0.1, -0.1});
    g.set(0, 0, Cell::Occupied);
    g.set(6, 3, Cell::Occupied);
    g.set(3, 2, Cell::Occupied);
    const std::string text = save_map(g);
    const auto g2 = load_map(text);
    CHECK(g2 == g);
    CHECK(save_map(g2) == text);
}

TEST_CASE("map loader rejects malformed input") {
    CHECK_THROWS_AS(load_map(""), std::invalid_argument);
    CHECK_THROWS_AS(load_map("0.1 2 2 0 0\n..\n"), std::invalid_argument);    // missing row
    CHECK_THROWS_AS(load_map("0.1 2 2 0 0\n..\n.x\n"), std::invalid_argument); // bad char
    CHECK_THROWS_AS(load_map("0.1 2 2 0 0\n...\n..\n"), std::invalid_argument); // bad width
    CHECK_NOTHROW(load_map("0.1 2 2 0 0\n.#\n..\n"));
}
