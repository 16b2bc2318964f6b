#pragma once

// Output writers. Every file starts with a header comment recording tool
// version, RNG seed, and a hash of the run configuration, so a run can be
// reproduced from its artifacts. Numbers are snprintf-formatted to keep
// reruns byte-identical.

#include <cstdint>
#include <string>
#include <vector>

#include "parsol/agronomy.hpp"
#include "parsol/radiation.hpp"
#include "parsol/time.hpp"

namespace parsol::mapio {

struct OutputMeta {
    uint64_t seed = 0;
    std::string config_hash; // 16 hex chars, see hash_config
};

// FNV-1a over the canonical config string.
std::string hash_config(const std::string& canonical_config);

std::string format_timestamp(const DateTime& t);

// Generic per-cell map: header, "row,col,<name>", one line per cell.
void write_map_csv(const std::string& path, const city::FacadeGrid& grid,
                   const std::vector<double>& values, const OutputMeta& meta,
                   const std::string& value_name, int precision = 6);

// row,col,dli,rounded
void write_dli_csv(const std::string& path, const rad::DliMap& map, const OutputMeta& meta);

// row,col,percent_sunlit (two decimals)
void write_shadow_csv(const std::string& path, const rad::ShadowMap& map,
                      const OutputMeta& meta);

// row,col,dli,suitable
void write_suitability_csv(const std::string& path, const agro::SuitabilityMap& map,
                           const OutputMeta& meta);

struct SeriesPoint {
    std::string label;
    DateTime when;
    double value = 0.0;
};

// label,timestamp,<name>
void write_series_csv(const std::string& path, const std::vector<SeriesPoint>& points,
                      const OutputMeta& meta, const std::string& value_name,
                      int precision = 6);

// 16x16-style heatmap, linear grayscale ramp, grid row 1 at the bottom.
void write_ppm(const std::string& path, int rows, int cols, const std::vector<double>& values,
               double vmax = 0.0);

// Reads a dli CSV back; the grid is synthetic (cell indices only).
rad::DliMap read_dli_csv(const std::string& path);

std::vector<SeriesPoint> read_series_csv(const std::string& path);

} // namespace parsol::mapio
