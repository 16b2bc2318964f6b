#include "parsol/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "parsol/error.hpp"
#include "parsol/parallel.hpp"
#include "parsol/rng.hpp"

namespace parsol::rad {

constexpr double kSelfHitEpsilon = 1e-6;
constexpr double kParPerWatt = 2.02;       // umol/J across 400-700 nm
constexpr double kDliPerDailyKwh = 7.272;  // 3.6 MJ/kWh x 2.02

RayHit ray_occluded(const city::CityScene& scene, const Vec3& origin, const Vec3& dir) {
    RayHit best;
    for (const auto& building : scene.buildings) {
        if (!building.aabb.intersects_ray(origin, dir)) continue;
        for (const auto& tri : building.triangles) {
            const double t = ray_triangle(origin, dir, tri, kSelfHitEpsilon);
            if (t > 0.0 && (!best.hit || t < best.distance)) {
                best.hit = true;
                best.distance = t;
            }
        }
    }
    if (scene.has_ground && dir.z < 0.0 && origin.z > 0.0) {
        const double t = -origin.z / dir.z;
        if (t > kSelfHitEpsilon && (!best.hit || t < best.distance)) {
            best.hit = true;
            best.distance = t;
        }
    }
    return best;
}

bool cell_sunlit(const city::CityScene& scene, const city::GridCell& cell,
                 const solar::SunVector& sun) {
    if (sun.elevation <= 0.0) return false;
    if (dot(cell.normal, sun.unit_dir) <= 0.0) return false;
    return !ray_occluded(scene, cell.centroid, sun.unit_dir).hit;
}

ShadowFraction shadow_fraction(const city::CityScene& scene, const city::GridCell& cell,
                               const solar::SitePosition& site, const Date& date,
                               double window_start_hour, double window_end_hour,
                               double step_minutes) {
    if (window_end_hour <= window_start_hour)
        throw InputError("shadow window must have positive duration");
    if (step_minutes <= 0.0) throw InputError("shadow step must be positive");

    const double step_h = step_minutes / 60.0;
    int daylight = 0, sunlit = 0;
    for (int k = 0;; ++k) {
        if (window_start_hour + (k + 1) * step_h > window_end_hour + 1e-9) break;
        const double t = window_start_hour + (k + 0.5) * step_h;
        const auto sun = solar::sun_position(site, DateTime{date, t});
        if (sun.elevation <= 0.0) continue;
        ++daylight;
        if (cell_sunlit(scene, cell, sun)) ++sunlit;
    }

    ShadowFraction result;
    if (daylight == 0) {
        result.no_sun = true;
    } else {
        result.fraction = static_cast<double>(sunlit) / daylight;
    }
    return result;
}

static void orthonormal_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
    const Vec3 helper = std::abs(n.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    t1 = normalized(cross(helper, n));
    t2 = cross(n, t1);
}

double sky_view_factor(const city::CityScene& scene, const city::GridCell& cell, int samples,
                       uint64_t seed) {
    if (samples < 64) throw InputError("sky view factor needs at least 64 samples");

    Vec3 t1, t2;
    orthonormal_basis(cell.normal, t1, t2);

    const int n1 = std::max(1, static_cast<int>(std::lround(std::sqrt(samples))));
    const int n2 = (samples + n1 - 1) / n1;

    SplitMix64 rng(seed);
    int open = 0;
    for (int k = 0; k < samples; ++k) {
        const int i = k % n1;
        const int j = k / n1;
        const double u1 = (i + rng.next_double()) / n1;
        const double u2 = (j + rng.next_double()) / n2;
        // Cosine-weighted: each unoccluded sample carries equal weight.
        const double r = std::sqrt(u1);
        const double phi = 2.0 * kPi * u2;
        const double lx = r * std::cos(phi);
        const double ly = r * std::sin(phi);
        const double lz = std::sqrt(std::max(0.0, 1.0 - u1));
        const Vec3 dir = t1 * lx + t2 * ly + cell.normal * lz;
        if (!ray_occluded(scene, cell.centroid, dir).hit) ++open;
    }
    return static_cast<double>(open) / samples;
}

double ground_view_factor(const Vec3& normal) {
    const double cos_tilt = std::clamp(normal.z, -1.0, 1.0);
    return (1.0 - cos_tilt) / 2.0;
}

double instantaneous_irradiance(const city::CityScene& scene, const city::GridCell& cell,
                                const solar::SunVector& sun,
                                const weather::IrradianceComponents& c, double albedo,
                                double svf) {
    if (albedo < 0.0 || albedo > 1.0) throw InputError("albedo must be within [0,1]");
    double e = c.dhi * svf;
    if (c.dni > 0.0 && cell_sunlit(scene, cell, sun))
        e += c.dni * std::max(0.0, dot(cell.normal, sun.unit_dir));
    if (albedo > 0.0) e += c.ghi * albedo * ground_view_factor(cell.normal);
    return e;
}

double par_from_irradiance(double irradiance_w_m2) {
    if (irradiance_w_m2 < 0.0) throw InputError("irradiance must be non-negative");
    return kParPerWatt * irradiance_w_m2;
}

double dli_from_daily_kwh(double kwh_per_day) { return kDliPerDailyKwh * kwh_per_day; }

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

ParMap par_map(const city::CityScene& scene, const city::FacadeGrid& grid,
               const solar::SitePosition& site, const DateTime& instant,
               weather::SkyCondition sky, double albedo, double turbidity, int svf_samples,
               uint64_t seed, unsigned threads) {
    const auto sun = solar::sun_position(site, instant);
    const auto components =
        weather::skytype_adjust(weather::clear_sky_components(sun, turbidity), sky);

    ParMap map;
    map.grid = grid;
    map.instant = instant;
    map.sky = sky;
    map.values.assign(grid.cells.size(), 0.0);
    parallel_for(
        grid.cells.size(),
        [&](size_t i) {
            const auto& cell = grid.cells[i];
            const double svf =
                sky_view_factor(scene, cell, svf_samples,
                                cell_seed(seed, static_cast<uint64_t>(cell.row),
                                          static_cast<uint64_t>(cell.col)));
            map.values[i] = par_from_irradiance(
                instantaneous_irradiance(scene, cell, sun, components, albedo, svf));
        },
        threads);
    return map;
}

int Period::days() const {
    const long long n = day_serial(end) - day_serial(start);
    if (n < 0) throw InputError("period end precedes start");
    return static_cast<int>(n) + 1;
}

Period month_period(int year, int month) {
    return Period{Date{year, month, 1}, Date{year, month, days_in_month(year, month)}};
}

Period year_period(int year) { return Period{Date{year, 1, 1}, Date{year, 12, 31}}; }

namespace {

struct HourSample {
    solar::SunVector sun;
    weather::IrradianceComponents components;
    bool missing = false;
};

// One entry per hour of the period, at hour midpoints, from measured EPW
// beam/diffuse. Shared across cells; recomputing the ephemeris per cell
// would dominate the run.
std::vector<HourSample> collect_hours(const weather::WeatherTable& epw, const Period& period) {
    std::vector<HourSample> hours;
    hours.reserve(static_cast<size_t>(period.days()) * 24);
    const auto site = epw.site();
    for (Date d = period.start;; d = next_day(d)) {
        for (int h = 1; h <= 24; ++h) {
            const auto* rec = epw.find(d.month, d.day, h);
            if (!rec)
                throw InputError("weather data has no record for " + std::to_string(d.year) +
                                 "-" + std::to_string(d.month) + "-" + std::to_string(d.day) +
                                 " hour " + std::to_string(h) + "; period outside data");
            HourSample sample;
            if (!rec->dni || !rec->dhi) {
                sample.missing = true;
            } else {
                sample.sun = solar::sun_position(site, DateTime{d, h - 0.5});
                sample.components.dni = *rec->dni;
                sample.components.dhi = *rec->dhi;
                const double sin_e = std::max(0.0, std::sin(deg2rad(sample.sun.elevation)));
                sample.components.ghi =
                    rec->ghi.value_or(sample.components.dni * sin_e + sample.components.dhi);
            }
            hours.push_back(sample);
        }
        if (d == period.end) break;
    }
    return hours;
}

double cell_energy_kwh(const city::CityScene& scene, const city::GridCell& cell,
                       const std::vector<HourSample>& hours, double albedo, double svf) {
    double wh = 0.0;
    for (const auto& hour : hours) {
        if (hour.missing) continue;
        if (hour.components.dni <= 0.0 && hour.components.dhi <= 0.0) continue;
        wh += instantaneous_irradiance(scene, cell, hour.sun, hour.components, albedo, svf);
    }
    return wh / 1000.0;
}

} // namespace

CumulativeResult cumulative_radiation(const city::CityScene& scene, const city::GridCell& cell,
                                      const weather::WeatherTable& epw, const Period& period,
                                      double albedo, double svf) {
    const auto hours = collect_hours(epw, period);
    CumulativeResult result;
    result.kwh_per_m2 = cell_energy_kwh(scene, cell, hours, albedo, svf);
    for (const auto& h : hours)
        if (h.missing) ++result.missing_hours;
    return result;
}

DliMap dli_map(const city::CityScene& scene, const city::FacadeGrid& grid,
               const weather::WeatherTable& epw, const Period& period, double albedo,
               int svf_samples, uint64_t seed, unsigned threads) {
    const auto hours = collect_hours(epw, period);
    const int days = period.days();
    if (days <= 0) throw InputError("empty averaging period");

    DliMap map;
    map.grid = grid;
    char label[32];
    std::snprintf(label, sizeof label, "%04d-%02d-%02d..%04d-%02d-%02d", period.start.year,
                  period.start.month, period.start.day, period.end.year, period.end.month,
                  period.end.day);
    map.period_label = label;
    map.values.assign(grid.cells.size(), 0.0);
    map.rounded.assign(grid.cells.size(), 0);
    for (const auto& h : hours)
        if (h.missing) ++map.missing_hours;

    parallel_for(
        grid.cells.size(),
        [&](size_t i) {
            const auto& cell = grid.cells[i];
            const double svf =
                sky_view_factor(scene, cell, svf_samples,
                                cell_seed(seed, static_cast<uint64_t>(cell.row),
                                          static_cast<uint64_t>(cell.col)));
            const double kwh = cell_energy_kwh(scene, cell, hours, albedo, svf);
            map.values[i] = dli_from_daily_kwh(kwh / days);
            map.rounded[i] = round_half_up(map.values[i]);
        },
        threads);
    return map;
}

ShadowMap shadow_map(const city::CityScene& scene, const city::FacadeGrid& grid,
                     const solar::SitePosition& site, const Date& date, double window_start_hour,
                     double window_end_hour, double step_minutes, unsigned threads) {
    ShadowMap map;
    map.grid = grid;
    map.date = date;
    map.window_start = window_start_hour;
    map.window_end = window_end_hour;
    map.values.assign(grid.cells.size(), 0.0);

    std::vector<char> no_sun(grid.cells.size(), 0);
    parallel_for(
        grid.cells.size(),
        [&](size_t i) {
            const auto sf = shadow_fraction(scene, grid.cells[i], site, date, window_start_hour,
                                            window_end_hour, step_minutes);
            map.values[i] = sf.fraction;
            no_sun[i] = sf.no_sun ? 1 : 0;
        },
        threads);
    for (char flag : no_sun) map.no_sun_cells += flag;
    return map;
}

} // namespace parsol::rad
