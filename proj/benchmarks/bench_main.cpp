#include <benchmark/benchmark.h>

#include "parsol/radiation.hpp"
#include "parsol/sceneio.hpp"
#include "parsol/solarpos.hpp"
#include "parsol/weather.hpp"

using namespace parsol;

namespace {

std::string data_path(const char* name) {
    return std::string(PARSOL_DATA_DIR) + "/" + name;
}

const city::CityScene& study_scene() {
    static const city::CityScene scene =
        sceneio::build_scene(sceneio::load_footprints(data_path("studyarea_footprints.json")));
    return scene;
}

city::FacadeGrid study_grid(int rows, int cols) {
    const auto& scene = study_scene();
    const auto ref = sceneio::resolve_facade(scene, "W");
    return city::grid_facade(city::extract_facade(scene.building(ref.building), ref.edge_index),
                             rows, cols);
}

void bm_sun_position(benchmark::State& state) {
    const solar::SitePosition site{1.35, 103.7, 8.0};
    int n = 0;
    for (auto _ : state) {
        for (double h = 0.0; h < 24.0; h += 0.25)
            benchmark::DoNotOptimize(solar::sun_position(site, {{2019, 3, 17}, h}));
        n += 96;
    }
    state.SetItemsProcessed(n);
}
BENCHMARK(bm_sun_position);

void bm_ray_occluded(benchmark::State& state) {
    const auto& scene = study_scene();
    const auto grid = study_grid(16, 16);
    const auto sun = solar::sun_position({1.35, 103.7, 8.0}, {{2019, 3, 17}, 15.0});
    int n = 0;
    for (auto _ : state) {
        for (const auto& cell : grid.cells)
            benchmark::DoNotOptimize(rad::ray_occluded(scene, cell.centroid, sun.unit_dir));
        n += static_cast<int>(grid.cells.size());
    }
    state.SetItemsProcessed(n);
}
BENCHMARK(bm_ray_occluded);

void bm_sky_view_factor(benchmark::State& state) {
    const auto& scene = study_scene();
    const auto grid = study_grid(16, 16);
    const auto& cell = grid.at(8, 8);
    for (auto _ : state)
        benchmark::DoNotOptimize(rad::sky_view_factor(scene, cell, 1024, 1));
}
BENCHMARK(bm_sky_view_factor)->Unit(benchmark::kMicrosecond);

void bm_shadow_map_day(benchmark::State& state) {
    const auto& scene = study_scene();
    const auto grid = study_grid(16, 16);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            rad::shadow_map(scene, grid, {1.35, 103.7, 8.0}, {2019, 3, 17}, 7.0, 19.0, 10.0));
}
BENCHMARK(bm_shadow_map_day)->Unit(benchmark::kMillisecond);

void bm_dli_month(benchmark::State& state) {
    const auto& scene = study_scene();
    const auto grid = study_grid(8, 8);
    static const auto table = weather::parse_epw_file(data_path("singapore_tmy.epw"));
    const auto march = rad::month_period(2019, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(rad::dli_map(scene, grid, table, march, 0.0, 256, 1, 0));
}
BENCHMARK(bm_dli_month)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
