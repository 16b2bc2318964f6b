#pragma once

// Footprint and scene files. Footprints arrive as JSON in a local planar
// CRS (meters); scenes round-trip through JSON with triangles included for
// external consumers.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parsol/citymodel.hpp"

namespace parsol::sceneio {

struct FootprintSpec {
    city::Footprint footprint;
    std::optional<double> explicit_height;       // overrides the levels estimate
    std::map<std::string, int> facade_labels;    // label -> footprint edge index
};

std::vector<FootprintSpec> load_footprints(const std::string& path);

struct StairstepEntry {
    std::vector<int> counts; // steps per flight
    double step_height = 0.0;
};

// CSV rows: name,step_height,count1,count2,...
std::map<std::string, StairstepEntry> load_stairsteps(const std::string& path);

// Height precedence: stairsteps, then explicit height, then levels.
city::CityScene build_scene(const std::vector<FootprintSpec>& specs,
                            const std::map<std::string, StairstepEntry>& stairsteps = {},
                            double level1_h = 3.6, double floor_h = 2.8,
                            double ground_albedo = 0.0);

void save_scene(const std::string& path, const city::CityScene& scene);
city::CityScene load_scene(const std::string& path);

// Resolves "building:edge" or a facade label unique in the scene.
struct FacadeRef {
    std::string building;
    int edge_index = 0;
    std::string label;
};

FacadeRef resolve_facade(const city::CityScene& scene, const std::string& spec);

} // namespace parsol::sceneio
