#pragma once

// LOD1 scene construction: footprint polygons extruded to closed prisms,
// facades extracted per footprint edge and gridded into analysis cells.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "parsol/geometry.hpp"

namespace parsol::city {

struct Footprint {
    std::string name;
    int levels = 0;                // 0 when an explicit height is given instead
    std::vector<Vec2> vertices;    // meters, local planar CRS, CCW after normalize
};

// Normalizes to counter-clockwise order (signed area test) and rejects
// degenerate or self-intersecting rings.
Footprint normalize_footprint(Footprint fp);

double signed_area(const std::vector<Vec2>& ring);
bool is_simple_polygon(const std::vector<Vec2>& ring);

double estimate_height_from_levels(int levels, double level1_h = 3.6, double floor_h = 2.8);
double estimate_height_from_stairsteps(const std::vector<int>& step_counts, double step_height);

struct BuildingPrism {
    std::string name;
    Footprint footprint; // normalized CCW
    double height = 0.0;
    std::vector<Triangle> triangles;
    Aabb aabb;
    std::map<std::string, int> facade_labels; // label -> footprint edge index
};

BuildingPrism extrude(const Footprint& fp, double height);

// Ear-clipping triangulation of a simple CCW polygon; returns index triples.
std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Vec2>& ring);

struct Facade {
    Vec3 origin;  // bottom-left corner, outside view
    Vec3 u;       // horizontal, left to right from outside
    Vec3 v;       // vertical, up
    Vec3 normal;  // outward, = u x v
    double width = 0.0;
    double height = 0.0;
    double azimuth = 0.0; // degrees clockwise from north
};

Facade extract_facade(const BuildingPrism& prism, int edge_index);

struct GridCell {
    int row = 0; // 1-based, row 1 at the bottom
    int col = 0; // 1-based, col 1 at the left (outside view)
    Vec3 centroid;
    Vec3 normal;
    double area = 0.0;
};

struct FacadeGrid {
    Facade facade;
    int rows = 16;
    int cols = 16;
    std::vector<GridCell> cells; // row-major, index = (row-1)*cols + (col-1)

    const GridCell& at(int row, int col) const;
};

FacadeGrid grid_facade(const Facade& facade, int rows = 16, int cols = 16, double offset = 0.01);

struct CellIndex {
    int row = 0;
    int col = 0;
};

// Maps a position on the facade (meters from the left edge and from the
// ground) to its grid cell by proportionality.
CellIndex map_sensor_to_cell(const Facade& facade, double x_from_left, double z_height,
                             int rows = 16, int cols = 16);

struct CityScene {
    std::vector<BuildingPrism> buildings;
    bool has_ground = true; // horizontal occluder plane at z = 0
    double ground_albedo = 0.0;

    const BuildingPrism& building(const std::string& name) const;
};

} // namespace parsol::city
