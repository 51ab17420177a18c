#include "hallway/grid.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hallway/util.hpp"

namespace hallway::world {

OccupancyGrid make_grid(double resolution, int width, int height, Vec2 origin) {
    if (resolution <= 0.0) throw std::invalid_argument("grid resolution must be > 0");
    if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be > 0");
    OccupancyGrid g;
    g.resolution = resolution;
    g.width = width;
    g.height = height;
    g.origin = origin;
    g.cells.assign(static_cast<std::size_t>(width) * height, Cell::Free);
    return g;
}

Costmap inflate(const OccupancyGrid& grid, double robot_radius, double inflation_radius) {
    if (grid.resolution <= 0.0) throw std::invalid_argument("inflate: non-positive resolution");
    if (robot_radius < 0.0 || inflation_radius < robot_radius)
        throw std::invalid_argument("inflate: need inflation_radius >= robot_radius >= 0");

    Costmap cm;
    cm.resolution = grid.resolution;
    cm.width = grid.width;
    cm.height = grid.height;
    cm.origin = grid.origin;
    cm.cost.assign(grid.cells.size(), 0.0);

    const int window = static_cast<int>(std::ceil(inflation_radius / grid.resolution)) + 1;
    const double band = inflation_radius - robot_radius;

    // Push each obstacle's contribution into its window; the max over
    // contributions equals the decay of the distance to the nearest obstacle
    // because the linear profile is monotone.
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            if (grid.at(col, row) != Cell::Occupied) continue;
            const int r0 = std::max(0, row - window);
            const int r1 = std::min(grid.height - 1, row + window);
            const int c0 = std::max(0, col - window);
            const int c1 = std::min(grid.width - 1, col + window);
            for (int r = r0; r <= r1; ++r) {
                for (int c = c0; c <= c1; ++c) {
                    const double dx = (c - col) * grid.resolution;
                    const double dy = (r - row) * grid.resolution;
                    const double d = std::sqrt(dx * dx + dy * dy);
                    double v;
                    if (d <= robot_radius) {
                        v = 1.0;
                    } else if (d >= inflation_radius) {
                        continue;
                    } else {
                        v = (inflation_radius - d) / band;
                    }
                    double& slot = cm.cost[static_cast<std::size_t>(r) * cm.width + c];
                    slot = std::max(slot, v);
                }
            }
        }
    }
    return cm;
}

namespace {

// Shared ray march: sample points every resolution/2 from just past `from`
// up to and including `to`. A sample blocks if its cell is occupied (or out
// of bounds) or it lies inside a non-skipped agent disc.
bool march_blocked(const OccupancyGrid& grid, const Vec2& from, const Vec2& to,
                   const std::vector<AgentDisc>& agents, int skip_agent) {
    const Vec2 delta = to - from;
    const double len = delta.norm();
    const double step = grid.resolution * 0.5;
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 1; i <= n; ++i) {
        const double t = std::min(1.0, (i * step) / len);
        const Vec2 p = from + delta * t;
        if (grid.occupied_at(p)) return true;
        for (std::size_t a = 0; a < agents.size(); ++a) {
            if (static_cast<int>(a) == skip_agent) continue;
            if (distance_sq(p, agents[a].position) < agents[a].radius * agents[a].radius)
                return true;
        }
        if (t >= 1.0) break;
    }
    return false;
}

}  // namespace

bool segment_clear(const OccupancyGrid& grid, const Vec2& from, const Vec2& to,
                   const std::vector<AgentDisc>& agents, int skip_agent) {
    if (distance_sq(from, to) == 0.0) return !grid.occupied_at(from);
    return !march_blocked(grid, from, to, agents, skip_agent);
}

VisibilityMask visible_region(const OccupancyGrid& grid, const Pose2& pose, double sensor_range,
                              const std::vector<AgentDisc>& agents) {
    const CellIndex pc = grid.world_to_cell(pose.position());
    if (!grid.in_bounds(pc.col, pc.row) || grid.at(pc.col, pc.row) == Cell::Occupied)
        throw std::invalid_argument("visible_region: sensor pose not in a free cell");

    VisibilityMask mask;
    mask.resolution = grid.resolution;
    mask.width = grid.width;
    mask.height = grid.height;
    mask.origin = grid.origin;
    mask.sensor_pose = pose;
    mask.sensor_range = sensor_range;
    mask.visible.assign(grid.cells.size(), 0);

    const Vec2 eye = pose.position();
    const double range_sq = sensor_range * sensor_range;

    // Only cells inside the range box can be visible.
    const int c0 = std::max(0, static_cast<int>(std::floor((eye.x - sensor_range - grid.origin.x) / grid.resolution)));
    const int c1 = std::min(grid.width - 1, static_cast<int>(std::floor((eye.x + sensor_range - grid.origin.x) / grid.resolution)));
    const int r0 = std::max(0, static_cast<int>(std::floor((eye.y - sensor_range - grid.origin.y) / grid.resolution)));
    const int r1 = std::min(grid.height - 1, static_cast<int>(std::floor((eye.y + sensor_range - grid.origin.y) / grid.resolution)));

    for (int row = r0; row <= r1; ++row) {
        for (int col = c0; col <= c1; ++col) {
            const Vec2 center = grid.cell_center(col, row);
            if (distance_sq(center, eye) > range_sq) continue;
            if (grid.at(col, row) == Cell::Occupied) continue;
            if (col == pc.col && row == pc.row) {
                // Own cell: only agent discs can cover it.
                bool covered = false;
                for (const auto& a : agents) {
                    if (distance_sq(center, a.position) < a.radius * a.radius) { covered = true; break; }
                }
                if (!covered) mask.visible[static_cast<std::size_t>(row) * mask.width + col] = 1;
                continue;
            }
            if (!march_blocked(grid, eye, center, agents, -1))
                mask.visible[static_cast<std::size_t>(row) * mask.width + col] = 1;
        }
    }
    return mask;
}

std::vector<CellIndex> frontier_cells(const VisibilityMask& mask, const OccupancyGrid& grid) {
    if (!mask.same_geometry(grid))
        throw std::invalid_argument("frontier_cells: mask/grid geometry mismatch");

    std::vector<CellIndex> out;
    static constexpr int kDx[4] = {1, -1, 0, 0};
    static constexpr int kDy[4] = {0, 0, 1, -1};
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            if (grid.at(col, row) != Cell::Free) continue;
            if (mask.is_visible(col, row)) continue;
            for (int k = 0; k < 4; ++k) {
                const int nc = col + kDx[k];
                const int nr = row + kDy[k];
                if (!grid.in_bounds(nc, nr)) continue;
                if (grid.at(nc, nr) == Cell::Free && mask.is_visible(nc, nr)) {
                    out.push_back({col, row});
                    break;
                }
            }
        }
    }
    return out;  // row-major scan already yields (row, col) order
}

std::string save_map(const OccupancyGrid& grid) {
    std::string out;
    out += fmt_double(grid.resolution);
    out += ' ';
    out += std::to_string(grid.width);
    out += ' ';
    out += std::to_string(grid.height);
    out += ' ';
    out += fmt_double(grid.origin.x);
    out += ' ';
    out += fmt_double(grid.origin.y);
    out += '\n';
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col)
            out += grid.at(col, row) == Cell::Occupied ? '#' : '.';
        out += '\n';
    }
    return out;
}

OccupancyGrid load_map(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("map: empty input");
    std::istringstream hs(header);
    double resolution = 0.0, ox = 0.0, oy = 0.0;
    int width = 0, height = 0;
    if (!(hs >> resolution >> width >> height >> ox >> oy))
        throw std::invalid_argument("map: bad header");
    OccupancyGrid g = make_grid(resolution, width, height, {ox, oy});
    for (int row = 0; row < height; ++row) {
        std::string line;
        if (!std::getline(in, line) || static_cast<int>(line.size()) != width)
            throw std::invalid_argument("map: bad row " + std::to_string(row));
        for (int col = 0; col < width; ++col) {
            if (line[col] == '#') g.set(col, row, Cell::Occupied);
            else if (line[col] != '.') throw std::invalid_argument("map: bad cell character");
        }
    }
    return g;
}

OccupancyGrid load_map_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("map: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_map(ss.str());
}

void save_map_file(const OccupancyGrid& grid, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("map: cannot write " + path);
    f << save_map(grid);
}

}  // namespace hallway::world
