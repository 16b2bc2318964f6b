#include "parsol/agronomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "parsol/error.hpp"

namespace parsol::agro {

const char* to_string(LightCategory c) {
    switch (c) {
        case LightCategory::VeryLow: return "very-low";
        case LightCategory::Low: return "low";
        case LightCategory::Moderate: return "moderate";
        case LightCategory::High: return "high";
    }
    return "?";
}

LightCategory light_category(double dli) {
    if (dli < 0.0) throw InputError("DLI must be non-negative");
    if (dli < 5.0) return LightCategory::VeryLow;
    if (dli < 10.0) return LightCategory::Low;
    if (dli < 20.0) return LightCategory::Moderate;
    return LightCategory::High;
}

void validate(const CropSpec& crop) {
    if (crop.name.empty()) throw InputError("crop needs a name");
    if (crop.min_dli < 0.0 || crop.min_dli >= crop.max_dli)
        throw InputError("crop '" + crop.name + "' needs 0 <= min_dli < max_dli");
}

std::vector<CropSpec> default_crops() {
    return {
        {"lettuce", "Lactuca sativa", 9.0, 20.0, LightCategory::Moderate},
        {"sweet pepper", "Capsicum annuum", 9.0, 20.0, LightCategory::Moderate},
    };
}

static LightCategory parse_category(const std::string& s, int line_no) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "very-low" || t == "verylow") return LightCategory::VeryLow;
    if (t == "low") return LightCategory::Low;
    if (t == "moderate") return LightCategory::Moderate;
    if (t == "high") return LightCategory::High;
    throw ParseError("unknown light category '" + s + "'", line_no);
}

std::vector<CropSpec> load_crops(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open crop file '" + path + "'");
    std::vector<CropSpec> crops;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        std::stringstream ss(line);
        std::string name, species, min_s, max_s, cat_s;
        if (!std::getline(ss, name, ',') || !std::getline(ss, species, ',') ||
            !std::getline(ss, min_s, ',') || !std::getline(ss, max_s, ',') ||
            !std::getline(ss, cat_s))
            throw ParseError("expected name,species,min_dli,max_dli,category", line_no);
        if (name == "name") continue; // header row
        CropSpec crop;
        crop.name = name;
        crop.species = species;
        try {
            crop.min_dli = std::stod(min_s);
            crop.max_dli = std::stod(max_s);
        } catch (const std::exception&) {
            throw ParseError("bad DLI bound in crop file", line_no);
        }
        if (!cat_s.empty() && cat_s.back() == '\r') cat_s.pop_back();
        crop.category = parse_category(cat_s, line_no);
        validate(crop);
        crops.push_back(crop);
    }
    if (crops.empty()) throw InputError("crop file '" + path + "' has no entries");
    return crops;
}

std::vector<CropMatch> suitable_crops(double dli, const std::vector<CropSpec>& crops) {
    if (dli < 0.0) throw InputError("DLI must be non-negative");
    if (crops.empty()) throw InputError("crop database is empty");
    std::vector<CropMatch> matches;
    for (const auto& crop : crops) {
        validate(crop);
        if (dli > crop.min_dli) matches.push_back(CropMatch{crop, dli > crop.max_dli});
    }
    return matches;
}

SuitabilityMap suitability_map(const rad::DliMap& dli, double threshold, bool use_rounded) {
    SuitabilityMap map;
    map.grid = dli.grid;
    map.threshold = threshold;
    map.used_rounded = use_rounded;
    map.dli.reserve(dli.values.size());
    map.mask.reserve(dli.values.size());
    for (size_t i = 0; i < dli.values.size(); ++i) {
        const double v = use_rounded ? static_cast<double>(dli.rounded[i]) : dli.values[i];
        map.dli.push_back(v);
        map.mask.push_back(v > threshold);
    }
    return map;
}

std::vector<int> levels_exceeding(const SuitabilityMap& map) {
    std::vector<int> levels;
    for (int r = 1; r <= map.grid.rows; ++r) {
        for (int c = 1; c <= map.grid.cols; ++c) {
            const size_t i = static_cast<size_t>(r - 1) * static_cast<size_t>(map.grid.cols) +
                             static_cast<size_t>(c - 1);
            if (map.mask[i]) {
                levels.push_back(r);
                break;
            }
        }
    }
    return levels;
}

std::string format_levels(const std::vector<int>& levels, int total_rows) {
    if (levels.empty()) return "none";
    if (static_cast<int>(levels.size()) == total_rows) return "all";

    // Compress a run that reaches the top level into "N and above".
    size_t run_start = levels.size();
    if (levels.back() == total_rows) {
        run_start = levels.size() - 1;
        while (run_start > 0 && levels[run_start - 1] == levels[run_start] - 1) --run_start;
    }

    std::string out;
    for (size_t i = 0; i < run_start; ++i) {
        if (!out.empty()) out += ", ";
        out += std::to_string(levels[i]);
    }
    if (run_start < levels.size()) {
        if (!out.empty()) out += ", ";
        out += std::to_string(levels[run_start]) + " and above";
    }
    return out;
}

std::string levels_summary(const SuitabilityMap& map) {
    return format_levels(levels_exceeding(map), map.grid.rows);
}

} // namespace parsol::agro
