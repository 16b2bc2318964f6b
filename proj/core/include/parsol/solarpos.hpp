#pragma once

// Sun geometry from analytic formulas: Spencer declination and equation of
// time, hour-angle trigonometry for azimuth/elevation. Accuracy budget is
// half a degree in elevation, one degree in azimuth; no refraction.

#include <vector>

#include "parsol/geometry.hpp"
#include "parsol/time.hpp"

namespace parsol::solar {

struct SitePosition {
    double latitude = 0.0;   // degrees, north positive
    double longitude = 0.0;  // degrees, east positive
    double utc_offset = 0.0; // hours ahead of UTC
};

void validate(const SitePosition& site);

struct SunVector {
    double azimuth = 0.0;   // degrees clockwise from north, [0, 360)
    double elevation = 0.0; // degrees above horizon, [-90, 90]
    Vec3 unit_dir{};        // toward the sun; x east, y north, z up

    bool above_horizon() const { return elevation > 0.0; }
};

// Solar declination in degrees for a 1-based ordinal day.
double solar_declination(int day_of_year);

// Apparent-minus-mean solar time offset in minutes.
double equation_of_time(int day_of_year);

// Apparent solar time in hours for a civil clock hour at the site.
double solar_time(const SitePosition& site, int day_of_year, double civil_hour);

SunVector sun_position(const SitePosition& site, const DateTime& instant);

struct SunSample {
    double hour; // local civil time
    SunVector sun;
};

// Samples the whole day at the given step; callers filter on above_horizon.
std::vector<SunSample> sun_path(const SitePosition& site, const Date& date,
                                double step_minutes = 60.0);

struct DaylightWindow {
    bool has_crossings = false; // sunrise/sunset valid
    double sunrise = 0.0;       // local civil hours
    double sunset = 0.0;
    bool always_up = false;   // polar day
    bool always_down = false; // polar night
};

// Horizon crossings to within a minute, by bisection on elevation.
DaylightWindow daylight_window(const SitePosition& site, const Date& date);

} // namespace parsol::solar
