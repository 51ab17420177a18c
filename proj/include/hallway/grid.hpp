#ifndef HALLWAY_GRID_HPP_
#define HALLWAY_GRID_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hallway/geometry.hpp"

namespace hallway::world {

enum class Cell : std::uint8_t { Free = 0, Occupied = 1 };

struct CellIndex {
    int col{0};
    int row{0};
    bool operator==(const CellIndex&) const = default;
};

/// Static occupancy grid. Row-major, cells[row * width + col]. origin is the
/// world position of the lower-left corner of cell (0, 0); cell centers sit
/// at origin + (col + 0.5, row + 0.5) * resolution.
struct OccupancyGrid {
    double resolution{0.1};
    int width{0};
    int height{0};
    Vec2 origin{};
    std::vector<Cell> cells;

    bool in_bounds(int col, int row) const {
        return col >= 0 && col < width && row >= 0 && row < height;
    }
    Cell at(int col, int row) const { return cells[static_cast<std::size_t>(row) * width + col]; }
    void set(int col, int row, Cell c) { cells[static_cast<std::size_t>(row) * width + col] = c; }

    CellIndex world_to_cell(const Vec2& p) const {
        return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
                static_cast<int>(std::floor((p.y - origin.y) / resolution))};
    }
    Vec2 cell_center(int col, int row) const {
        return {origin.x + (col + 0.5) * resolution, origin.y + (row + 0.5) * resolution};
    }

    /// Occupancy at a world point; out-of-bounds counts as occupied.
    bool occupied_at(const Vec2& p) const {
        const CellIndex c = world_to_cell(p);
        return !in_bounds(c.col, c.row) || at(c.col, c.row) == Cell::Occupied;
    }

    bool operator==(const OccupancyGrid&) const = default;
};

OccupancyGrid make_grid(double resolution, int width, int height, Vec2 origin = {});

/// Inflated traversal cost, same geometry as the source grid. cost in [0, 1],
/// 1 within robot_radius of an obstacle, 0 beyond inflation_radius, linear
/// in between.
struct Costmap {
    double resolution{0.1};
    int width{0};
    int height{0};
    Vec2 origin{};
    std::vector<double> cost;

    bool in_bounds(int col, int row) const {
        return col >= 0 && col < width && row >= 0 && row < height;
    }
    double at(int col, int row) const { return cost[static_cast<std::size_t>(row) * width + col]; }

    /// Cost at a world point; out-of-bounds is lethal.
    double cost_at(const Vec2& p) const {
        const int col = static_cast<int>(std::floor((p.x - origin.x) / resolution));
        const int row = static_cast<int>(std::floor((p.y - origin.y) / resolution));
        return in_bounds(col, row) ? at(col, row) : 1.0;
    }
};

/// Instantaneous visibility of the map from one sensor pose. Agents occlude
/// as opaque discs but do not occupy cells.
struct VisibilityMask {
    double resolution{0.1};
    int width{0};
    int height{0};
    Vec2 origin{};
    Pose2 sensor_pose{};
    double sensor_range{0.0};
    std::vector<std::uint8_t> visible;  // 1 = Visible, 0 = Unknown

    bool in_bounds(int col, int row) const {
        return col >= 0 && col < width && row >= 0 && row < height;
    }
    bool is_visible(int col, int row) const {
        return visible[static_cast<std::size_t>(row) * width + col] != 0;
    }
    bool visible_at(const Vec2& p) const {
        const int col = static_cast<int>(std::floor((p.x - origin.x) / resolution));
        const int row = static_cast<int>(std::floor((p.y - origin.y) / resolution));
        return in_bounds(col, row) && is_visible(col, row);
    }
    bool same_geometry(const OccupancyGrid& g) const {
        return resolution == g.resolution && width == g.width && height == g.height &&
               origin == g.origin;
    }
};

struct AgentDisc {
    Vec2 position{};
    double radius{0.0};
};

/// Obstacle inflation: lethal band of robot_radius around occupied cells,
/// linear decay out to inflation_radius. Distances are between cell centers.
Costmap inflate(const OccupancyGrid& grid, double robot_radius, double inflation_radius);

/// Per-cell ray test from the sensor pose to every cell center within range.
/// March step is resolution / 2; occupied cells and agent discs block. The
/// target cell itself counts: an occupied or disc-covered cell is Unknown.
VisibilityMask visible_region(const OccupancyGrid& grid, const Pose2& pose, double sensor_range,
                              const std::vector<AgentDisc>& agents);

/// Free cells flagged Unknown with at least one Visible Free 4-neighbor,
/// sorted by (row, col).
std::vector<CellIndex> frontier_cells(const VisibilityMask& mask, const OccupancyGrid& grid);

/// True when the open segment from `from` to `to` crosses no occupied cell
/// and no agent disc (the disc at index skip_agent is ignored; pass -1 to
/// keep all). Same res/2 marching as visible_region.
bool segment_clear(const OccupancyGrid& grid, const Vec2& from, const Vec2& to,
                   const std::vector<AgentDisc>& agents, int skip_agent = -1);

// Plain-text map format: "resolution width height origin_x origin_y" header,
// then `height` rows of '.') / '#' characters, row 0 first.
std::string save_map(const OccupancyGrid& grid);
OccupancyGrid load_map(const std::string& text);
OccupancyGrid load_map_file(const std::string& path);
void save_map_file(const OccupancyGrid& grid, const std::string& path);

}  // namespace hallway::world

#endif  // HALLWAY_GRID_HPP_
