#include "parsol/solarpos.hpp"

#include <cmath>
#include <string>

#include "parsol/error.hpp"

namespace parsol::solar {

void validate(const SitePosition& site) {
    if (std::abs(site.latitude) > 90.0)
        throw InputError("latitude out of range: " + std::to_string(site.latitude));
    if (std::abs(site.longitude) > 180.0)
        throw InputError("longitude out of range: " + std::to_string(site.longitude));
}

static void check_day(int n) {
    if (n < 1 || n > 366) throw InputError("day of year out of range: " + std::to_string(n));
}

double solar_declination(int day_of_year) {
    check_day(day_of_year);
    const double b = 2.0 * kPi * (day_of_year - 1) / 365.0;
    const double decl_rad = 0.006918 - 0.399912 * std::cos(b) + 0.070257 * std::sin(b) -
                            0.006758 * std::cos(2 * b) + 0.000907 * std::sin(2 * b) -
                            0.002697 * std::cos(3 * b) + 0.00148 * std::sin(3 * b);
    return rad2deg(decl_rad);
}

double equation_of_time(int day_of_year) {
    check_day(day_of_year);
    const double b = 2.0 * kPi * (day_of_year - 1) / 365.0;
    return 229.18 * (0.000075 + 0.001868 * std::cos(b) - 0.032077 * std::sin(b) -
                     0.014615 * std::cos(2 * b) - 0.04089 * std::sin(2 * b));
}

double solar_time(const SitePosition& site, int day_of_year, double civil_hour) {
    // 4 minutes per degree of longitude east of the zone meridian.
    const double offset_minutes =
        4.0 * (site.longitude - 15.0 * site.utc_offset) + equation_of_time(day_of_year);
    return civil_hour + offset_minutes / 60.0;
}

SunVector sun_position(const SitePosition& site, const DateTime& instant) {
    validate(site);
    const int n = day_of_year(instant.date);

    const double decl = deg2rad(solar_declination(n));
    const double lat = deg2rad(site.latitude);
    const double hour_angle = deg2rad(15.0 * (solar_time(site, n, instant.hour) - 12.0));

    const double sin_e = std::sin(lat) * std::sin(decl) +
                         std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
    const double elevation = std::asin(std::clamp(sin_e, -1.0, 1.0));

    // Horizontal projection of the sun direction; east negative when the sun
    // is west of the meridian (hour angle positive).
    const double east = -std::cos(decl) * std::sin(hour_angle);
    const double north = std::sin(decl) * std::cos(lat) -
                         std::cos(decl) * std::cos(hour_angle) * std::sin(lat);

    double azimuth = rad2deg(std::atan2(east, north));
    if (azimuth < 0.0) azimuth += 360.0;
    if (azimuth >= 360.0) azimuth -= 360.0;

    SunVector sun;
    sun.azimuth = azimuth;
    sun.elevation = rad2deg(elevation);
    const double az = deg2rad(azimuth);
    sun.unit_dir = Vec3{std::cos(elevation) * std::sin(az), std::cos(elevation) * std::cos(az),
                        std::sin(elevation)};
    return sun;
}

std::vector<SunSample> sun_path(const SitePosition& site, const Date& date, double step_minutes) {
    if (step_minutes <= 0.0) throw InputError("sun path step must be positive");
    const double step_hours = step_minutes / 60.0;
    const double n_steps = 24.0 / step_hours;
    if (std::abs(n_steps - std::round(n_steps)) > 1e-9)
        throw InputError("sun path step must divide 24 hours");

    std::vector<SunSample> samples;
    const int count = static_cast<int>(std::round(n_steps));
    samples.reserve(static_cast<size_t>(count) + 1);
    for (int i = 0; i <= count; ++i) {
        const double hour = i * step_hours;
        // Hour 24.0 is the same civil day's end, fold for the ephemeris call.
        const DateTime instant{hour < 24.0 ? date : next_day(date),
                               hour < 24.0 ? hour : 0.0};
        samples.push_back(SunSample{hour, sun_position(site, instant)});
    }
    return samples;
}

DaylightWindow daylight_window(const SitePosition& site, const Date& date) {
    auto elevation_at = [&](double hour) {
        return sun_position(site, DateTime{date, hour}).elevation;
    };

    // Coarse 5-minute scan for sign changes, then bisect each crossing.
    const double coarse = 5.0 / 60.0;
    double prev_h = 0.0;
    double prev_e = elevation_at(0.0);
    bool any_up = prev_e > 0.0;
    bool any_down = prev_e <= 0.0;

    double rise = -1.0, set = -1.0;
    for (double h = coarse; h <= 24.0 + 1e-9; h += coarse) {
        const double e = elevation_at(std::min(h, 24.0 - 1e-9));
        any_up = any_up || e > 0.0;
        any_down = any_down || e <= 0.0;
        if ((prev_e <= 0.0) != (e <= 0.0)) {
            double lo = prev_h, hi = std::min(h, 24.0 - 1e-9);
            double elo = prev_e;
            for (int i = 0; i < 40 && hi - lo > 1.0 / 3600.0; ++i) {
                const double mid = 0.5 * (lo + hi);
                const double em = elevation_at(mid);
                if ((elo <= 0.0) == (em <= 0.0)) {
                    lo = mid;
                    elo = em;
                } else {
                    hi = mid;
                }
            }
            const double crossing = 0.5 * (lo + hi);
            if (prev_e <= 0.0)
                rise = crossing;
            else
                set = crossing;
        }
        prev_h = h;
        prev_e = e;
    }

    DaylightWindow window;
    if (rise >= 0.0 && set >= 0.0) {
        window.has_crossings = true;
        window.sunrise = rise;
        window.sunset = set;
    } else if (any_up && !any_down) {
        window.always_up = true;
    } else if (any_down && !any_up) {
        window.always_down = true;
    } else if (rise >= 0.0 || set >= 0.0) {
        // One crossing only (sun rises but does not set this civil day, or
        // vice versa); report what exists without inventing the other bound.
        window.has_crossings = true;
        window.sunrise = rise >= 0.0 ? rise : 0.0;
        window.sunset = set >= 0.0 ? set : 24.0;
    }
    return window;
}

} // namespace parsol::solar
