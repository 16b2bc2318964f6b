#include "parsol/citymodel.hpp"

#include <algorithm>
#include <cmath>

#include "parsol/error.hpp"

namespace parsol::city {

double signed_area(const std::vector<Vec2>& ring) {
    double twice = 0.0;
    const size_t n = ring.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

static double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

static bool on_segment(const Vec2& p, const Vec2& q, const Vec2& r) {
    constexpr double kEps = 1e-9;
    return q.x >= std::min(p.x, r.x) - kEps && q.x <= std::max(p.x, r.x) + kEps &&
           q.y >= std::min(p.y, r.y) - kEps && q.y <= std::max(p.y, r.y) + kEps;
}

static bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    constexpr double kEps = 1e-12;
    const double d1 = cross2(c, d, a);
    const double d2 = cross2(c, d, b);
    const double d3 = cross2(a, b, c);
    const double d4 = cross2(a, b, d);
    if (((d1 > kEps && d2 < -kEps) || (d1 < -kEps && d2 > kEps)) &&
        ((d3 > kEps && d4 < -kEps) || (d3 < -kEps && d4 > kEps)))
        return true;
    if (std::abs(d1) <= kEps && on_segment(c, a, d)) return true;
    if (std::abs(d2) <= kEps && on_segment(c, b, d)) return true;
    if (std::abs(d3) <= kEps && on_segment(a, c, b)) return true;
    if (std::abs(d4) <= kEps && on_segment(a, d, b)) return true;
    return false;
}

bool is_simple_polygon(const std::vector<Vec2>& ring) {
    const size_t n = ring.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // Edges sharing a vertex may touch there; skip adjacent pairs.
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

Footprint normalize_footprint(Footprint fp) {
    if (fp.vertices.size() < 3)
        throw GeometryError("footprint '" + fp.name + "' needs at least 3 vertices");
    for (size_t i = 0; i < fp.vertices.size(); ++i) {
        const Vec2& a = fp.vertices[i];
        const Vec2& b = fp.vertices[(i + 1) % fp.vertices.size()];
        if (std::abs(a.x - b.x) < 1e-9 && std::abs(a.y - b.y) < 1e-9)
            throw GeometryError("footprint '" + fp.name + "' has a duplicate vertex");
    }
    const double area = signed_area(fp.vertices);
    if (std::abs(area) < 1e-9)
        throw GeometryError("footprint '" + fp.name + "' has zero area");
    if (area < 0.0) std::reverse(fp.vertices.begin(), fp.vertices.end());
    if (!is_simple_polygon(fp.vertices))
        throw GeometryError("footprint '" + fp.name + "' self-intersects");
    return fp;
}

double estimate_height_from_levels(int levels, double level1_h, double floor_h) {
    if (levels < 1) throw InputError("level count must be positive");
    if (level1_h <= 0.0 || floor_h <= 0.0) throw InputError("floor heights must be positive");
    return level1_h + (levels - 1) * floor_h;
}

double estimate_height_from_stairsteps(const std::vector<int>& step_counts, double step_height) {
    if (step_counts.empty()) throw InputError("no stairstep counts given");
    if (step_height <= 0.0) throw InputError("step height must be positive");
    long total = 0;
    for (int c : step_counts) {
        if (c <= 0) throw InputError("stairstep count must be positive");
        total += c;
    }
    return step_height * static_cast<double>(total);
}

static bool point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
    constexpr double kEps = 1e-9;
    return cross2(a, b, p) >= -kEps && cross2(b, c, p) >= -kEps && cross2(c, a, p) >= -kEps;
}

std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Vec2>& ring) {
    const int n = static_cast<int>(ring.size());
    if (n < 3) throw GeometryError("cannot triangulate a ring with fewer than 3 vertices");

    std::vector<int> remaining(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) remaining[static_cast<size_t>(i)] = i;

    std::vector<std::array<int, 3>> tris;
    tris.reserve(static_cast<size_t>(n) - 2);

    while (remaining.size() > 3) {
        const size_t m = remaining.size();
        bool clipped = false;
        for (size_t k = 0; k < m; ++k) {
            const int ia = remaining[(k + m - 1) % m];
            const int ib = remaining[k];
            const int ic = remaining[(k + 1) % m];
            const Vec2& a = ring[static_cast<size_t>(ia)];
            const Vec2& b = ring[static_cast<size_t>(ib)];
            const Vec2& c = ring[static_cast<size_t>(ic)];
            if (cross2(a, b, c) <= 1e-12) continue; // reflex or collinear corner
            bool blocked = false;
            for (int other : remaining) {
                if (other == ia || other == ib || other == ic) continue;
                if (point_in_triangle(ring[static_cast<size_t>(other)], a, b, c)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tris.push_back({ia, ib, ic});
            remaining.erase(remaining.begin() + static_cast<long>(k));
            clipped = true;
            break;
        }
        if (!clipped) throw GeometryError("ear clipping failed; polygon may be degenerate");
    }
    tris.push_back({remaining[0], remaining[1], remaining[2]});
    return tris;
}

BuildingPrism extrude(const Footprint& fp, double height) {
    if (height <= 0.0) throw InputError("extrusion height must be positive");
    BuildingPrism prism;
    prism.footprint = normalize_footprint(fp);
    prism.name = fp.name;
    prism.height = height;

    const auto& ring = prism.footprint.vertices;
    const size_t n = ring.size();
    prism.triangles.reserve(2 * n + 2 * (n - 2));

    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = ring[i];
        const Vec2& q = ring[(i + 1) % n];
        const Vec3 a{p.x, p.y, 0.0}, b{q.x, q.y, 0.0};
        const Vec3 at{p.x, p.y, height}, bt{q.x, q.y, height};
        // CCW ring makes (a, b, bt) wind outward.
        prism.triangles.push_back(Triangle{a, b, bt});
        prism.triangles.push_back(Triangle{a, bt, at});
    }

    for (const auto& t : triangulate_polygon(ring)) {
        const Vec2& a = ring[static_cast<size_t>(t[0])];
        const Vec2& b = ring[static_cast<size_t>(t[1])];
        const Vec2& c = ring[static_cast<size_t>(t[2])];
        // Top cap keeps CCW order (normal up); bottom cap is reversed.
        prism.triangles.push_back(
            Triangle{{a.x, a.y, height}, {b.x, b.y, height}, {c.x, c.y, height}});
        prism.triangles.push_back(Triangle{{a.x, a.y, 0.0}, {c.x, c.y, 0.0}, {b.x, b.y, 0.0}});
    }

    for (const auto& tri : prism.triangles) {
        prism.aabb.expand(tri.a);
        prism.aabb.expand(tri.b);
        prism.aabb.expand(tri.c);
    }
    return prism;
}

Facade extract_facade(const BuildingPrism& prism, int edge_index) {
    const auto& ring = prism.footprint.vertices;
    const int n = static_cast<int>(ring.size());
    if (edge_index < 0 || edge_index >= n)
        throw InputError("facade edge index " + std::to_string(edge_index) + " out of range for '" +
                         prism.name + "' (" + std::to_string(n) + " edges)");

    const Vec2& a = ring[static_cast<size_t>(edge_index)];
    const Vec2& b = ring[static_cast<size_t>((edge_index + 1) % n)];
    const Vec3 a3{a.x, a.y, 0.0};
    const Vec3 b3{b.x, b.y, 0.0};

    Facade f;
    f.origin = a3;
    f.width = norm(b3 - a3);
    f.height = prism.height;
    f.u = normalized(b3 - a3);
    f.v = Vec3{0.0, 0.0, 1.0};
    f.normal = cross(f.u, f.v); // outward for a CCW ring
    f.azimuth = rad2deg(std::atan2(f.normal.x, f.normal.y));
    if (f.azimuth < 0.0) f.azimuth += 360.0;
    return f;
}

const GridCell& FacadeGrid::at(int row, int col) const {
    if (row < 1 || row > rows || col < 1 || col > cols)
        throw InputError("grid cell (" + std::to_string(row) + "," + std::to_string(col) +
                         ") out of range");
    return cells[static_cast<size_t>(row - 1) * static_cast<size_t>(cols) +
                 static_cast<size_t>(col - 1)];
}

FacadeGrid grid_facade(const Facade& facade, int rows, int cols, double offset) {
    if (rows < 1 || cols < 1) throw InputError("grid must have at least one row and column");
    if (offset < 0.0) throw InputError("grid offset must be non-negative");

    FacadeGrid grid;
    grid.facade = facade;
    grid.rows = rows;
    grid.cols = cols;
    grid.cells.reserve(static_cast<size_t>(rows) * static_cast<size_t>(cols));

    const double cell_w = facade.width / cols;
    const double cell_h = facade.height / rows;
    for (int r = 1; r <= rows; ++r) {
        for (int c = 1; c <= cols; ++c) {
            GridCell cell;
            cell.row = r;
            cell.col = c;
            cell.centroid = facade.origin + facade.u * ((c - 0.5) * cell_w) +
                            facade.v * ((r - 0.5) * cell_h) + facade.normal * offset;
            cell.normal = facade.normal;
            cell.area = cell_w * cell_h;
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

CellIndex map_sensor_to_cell(const Facade& facade, double x_from_left, double z_height, int rows,
                             int cols) {
    if (x_from_left < 0.0 || x_from_left > facade.width)
        throw InputError("sensor x position outside facade width");
    if (z_height < 0.0 || z_height > facade.height)
        throw InputError("sensor height outside facade");
    const int row = static_cast<int>(std::ceil(z_height / facade.height * rows));
    const int col = static_cast<int>(std::ceil(x_from_left / facade.width * cols));
    return CellIndex{std::clamp(row, 1, rows), std::clamp(col, 1, cols)};
}

const BuildingPrism& CityScene::building(const std::string& name) const {
    for (const auto& b : buildings)
        if (b.name == name) return b;
    throw InputError("no building named '" + name + "' in scene");
}

} // namespace parsol::city
