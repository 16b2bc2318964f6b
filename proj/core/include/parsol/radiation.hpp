#pragma once

// Geometric-optics core: ray-cast visibility against the extruded scene,
// shadow fractions over time windows, hemisphere-sampled sky view factors,
// instantaneous irradiance/PAR per cell, and cumulative radiation to DLI.

#include <cstdint>
#include <string>
#include <vector>

#include "parsol/citymodel.hpp"
#include "parsol/solarpos.hpp"
#include "parsol/time.hpp"
#include "parsol/weather.hpp"

namespace parsol::rad {

struct RayHit {
    bool hit = false;
    double distance = 0.0;
};

// Nearest intersection beyond the self-intersection epsilon (1e-6 m).
// The ground plane at z=0 occludes descending rays only.
RayHit ray_occluded(const city::CityScene& scene, const Vec3& origin, const Vec3& dir);

bool cell_sunlit(const city::CityScene& scene, const city::GridCell& cell,
                 const solar::SunVector& sun);

struct ShadowFraction {
    double fraction = 0.0; // sunlit samples / above-horizon samples
    bool no_sun = false;   // window had no above-horizon samples
};

ShadowFraction shadow_fraction(const city::CityScene& scene, const city::GridCell& cell,
                               const solar::SitePosition& site, const Date& date,
                               double window_start_hour, double window_end_hour,
                               double step_minutes = 10.0);

// Cosine-weighted stratified hemisphere sampling about the cell normal.
// Deterministic for a fixed seed.
double sky_view_factor(const city::CityScene& scene, const city::GridCell& cell,
                       int samples = 1024, uint64_t seed = 1);

// (1 - cos tilt)/2; 0.5 for vertical facades, 0 facing straight up.
double ground_view_factor(const Vec3& normal);

// Beam (if sunlit) + isotropic diffuse via SVF + constant-albedo ground term.
double instantaneous_irradiance(const city::CityScene& scene, const city::GridCell& cell,
                                const solar::SunVector& sun,
                                const weather::IrradianceComponents& c, double albedo,
                                double svf);

// 2.02 umol/J over the PAR band.
double par_from_irradiance(double irradiance_w_m2);

// kWh/m2/day to mol/m2/day (3.6 x 2.02).
double dli_from_daily_kwh(double kwh_per_day);

int round_half_up(double v);

struct ParMap {
    city::FacadeGrid grid;
    DateTime instant;
    weather::SkyCondition sky = weather::SkyCondition::Sunny;
    std::vector<double> values; // row-major, same order as grid.cells
};

ParMap par_map(const city::CityScene& scene, const city::FacadeGrid& grid,
               const solar::SitePosition& site, const DateTime& instant,
               weather::SkyCondition sky, double albedo = 0.0, double turbidity = 2.75,
               int svf_samples = 1024, uint64_t seed = 1, unsigned threads = 0);

struct Period {
    Date start;
    Date end; // inclusive

    int days() const;
};

Period month_period(int year, int month);
Period year_period(int year);

struct CumulativeResult {
    double kwh_per_m2 = 0.0;
    int missing_hours = 0; // hours skipped for absent radiation fields
};

// Hour-by-hour energy using measured EPW beam/diffuse at hour midpoints.
CumulativeResult cumulative_radiation(const city::CityScene& scene, const city::GridCell& cell,
                                      const weather::WeatherTable& epw, const Period& period,
                                      double albedo, double svf);

struct DliMap {
    city::FacadeGrid grid;
    std::string period_label;
    std::vector<double> values; // mol m-2 day-1, row-major
    std::vector<int> rounded;   // round-half-up integers
    int missing_hours = 0;
};

DliMap dli_map(const city::CityScene& scene, const city::FacadeGrid& grid,
               const weather::WeatherTable& epw, const Period& period, double albedo = 0.0,
               int svf_samples = 1024, uint64_t seed = 1, unsigned threads = 0);

struct ShadowMap {
    city::FacadeGrid grid;
    Date date;
    double window_start = 0.0;
    double window_end = 0.0;
    std::vector<double> values; // fraction sunlit, row-major
    int no_sun_cells = 0;
};

ShadowMap shadow_map(const city::CityScene& scene, const city::FacadeGrid& grid,
                     const solar::SitePosition& site, const Date& date, double window_start_hour,
                     double window_end_hour, double step_minutes = 10.0, unsigned threads = 0);

} // namespace parsol::rad
