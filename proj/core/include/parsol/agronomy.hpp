#pragma once

// Crop light requirements: DLI light categories, per-cell suitability
// masks, and the per-level summary report.

#include <string>
#include <vector>

#include "parsol/radiation.hpp"

namespace parsol::agro {

enum class LightCategory { VeryLow, Low, Moderate, High };

const char* to_string(LightCategory c);

// Lower-inclusive bands: <5 very low, [5,10) low, [10,20) moderate, >=20 high.
LightCategory light_category(double dli);

struct CropSpec {
    std::string name;
    std::string species;
    double min_dli = 0.0;
    double max_dli = 0.0; // advisory upper bound, reported but never filtered on
    LightCategory category = LightCategory::Moderate;
};

void validate(const CropSpec& crop);

// Lettuce and sweet pepper, both needing DLI above 9.
std::vector<CropSpec> default_crops();

// CSV rows: name,species,min_dli,max_dli,category
std::vector<CropSpec> load_crops(const std::string& path);

struct CropMatch {
    CropSpec crop;
    bool above_advisory_max = false;
};

// Crops whose minimum DLI the value strictly exceeds.
std::vector<CropMatch> suitable_crops(double dli, const std::vector<CropSpec>& crops);

struct SuitabilityMap {
    city::FacadeGrid grid;
    double threshold = 9.0;
    bool used_rounded = true;
    std::vector<double> dli;  // the values the mask was computed from
    std::vector<bool> mask;   // true where dli strictly exceeds threshold
};

// use_rounded compares the integer-rounded DLI (the default downstream
// convention); pass false to compare raw values.
SuitabilityMap suitability_map(const rad::DliMap& dli, double threshold = 9.0,
                               bool use_rounded = true);

// Levels (rows) at which any cell's mask is true, formatted like
// "all", "none", "14 and above", or "1, 2, 7 and above".
std::string levels_summary(const SuitabilityMap& map);

std::vector<int> levels_exceeding(const SuitabilityMap& map);
std::string format_levels(const std::vector<int>& levels, int total_rows);

} // namespace parsol::agro
