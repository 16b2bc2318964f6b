#pragma once

// EPW weather tables, forecast-category skytypes, and a small clear-sky
// irradiance model for skytype-conditioned instantaneous maps. Cumulative
// (DLI) analysis reads measured EPW components directly; the clear-sky
// model only backs the instantaneous map pathway.

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parsol/solarpos.hpp"
#include "parsol/time.hpp"

namespace parsol::weather {

enum class SkyCondition { Sunny, PartlyCloudy, Cloudy };

const char* to_string(SkyCondition sky);

// Maps forecast categories to the three-way skytype. Case-insensitive,
// trimmed; anything outside the five known categories is an error.
SkyCondition classify_skytype(const std::string& forecast);

struct WeatherRecord {
    int year = 0;
    int month = 0;
    int day = 0;
    int hour = 0; // 1..24, covering the interval [hour-1, hour]
    std::optional<double> dry_bulb; // degC
    std::optional<double> ghi;      // W/m2, global horizontal
    std::optional<double> dni;      // W/m2, direct normal
    std::optional<double> dhi;      // W/m2, diffuse horizontal
};

struct WeatherTable {
    std::string location;
    double latitude = 0.0;
    double longitude = 0.0;
    double utc_offset = 0.0;
    std::vector<WeatherRecord> records;

    solar::SitePosition site() const { return {latitude, longitude, utc_offset}; }

    // Looks a record up by calendar position, ignoring the record year
    // (typical-year files stitch months from different years).
    const WeatherRecord* find(int month, int day, int hour) const;

    void rebuild_index();

  private:
    std::map<int, size_t> index_;
};

// require_full_year demands 8760 or 8784 records; disable it for small
// hand-crafted tables in tests.
WeatherTable parse_epw(std::istream& in, bool require_full_year = true);
WeatherTable parse_epw_file(const std::string& path, bool require_full_year = true);

std::string serialize_epw(const WeatherTable& table);

struct IrradianceComponents {
    double dni = 0.0;
    double dhi = 0.0;
    double ghi = 0.0;
};

// Kasten-Young airmass with a simple beam attenuation; diffuse is a fixed
// fraction of the extraterrestrial flux scaled by elevation.
IrradianceComponents clear_sky_components(const solar::SunVector& sun, double turbidity = 2.75);

struct SkytypeMultipliers {
    double sunny_dni = 1.0;
    double sunny_dhi = 1.0;
    double partly_cloudy_dni = 0.15;
    double partly_cloudy_dhi = 1.2;
    double cloudy_dni = 0.0;
    double cloudy_dhi = 0.7;
};

IrradianceComponents skytype_adjust(const IrradianceComponents& c, SkyCondition sky,
                                    const SkytypeMultipliers& m = {});

enum class DaySegment { Morning, Afternoon, Night };

DaySegment segment_for_hour(double hour);

// Forecast schedule: one skytype per (date, day segment). CSV rows are
// date,segment,category. Hours before 6am belong to the previous date's
// night segment.
struct SkySchedule {
    std::map<std::pair<int, int>, SkyCondition> entries; // (day serial, segment)

    void add(const Date& date, DaySegment seg, SkyCondition sky);
    SkyCondition lookup(const DateTime& instant) const;
};

SkySchedule load_sky_schedule(const std::string& path);

} // namespace parsol::weather
