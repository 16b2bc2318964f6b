// parsol: scene building, sun paths, shadow maps, PAR/DLI maps, crop
// suitability, and measured-vs-simulated validation from one binary.
//
// Exit codes: 0 success, 2 bad input (files, arguments), 3 computation error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parsol/agronomy.hpp"
#include "parsol/citymodel.hpp"
#include "parsol/error.hpp"
#include "parsol/mapio.hpp"
#include "parsol/radiation.hpp"
#include "parsol/rng.hpp"
#include "parsol/sceneio.hpp"
#include "parsol/solarpos.hpp"
#include "parsol/validation.hpp"
#include "parsol/version.hpp"
#include "parsol/weather.hpp"

namespace fs = std::filesystem;
using namespace parsol;

namespace {

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':' || c == ',' || c == ' ' || c == '/') c = '-';
    return s;
}

std::string out_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

double parse_clock(const std::string& text) {
    int h = 0, m = 0;
    const int n = std::sscanf(text.c_str(), "%d:%d", &h, &m);
    if (n < 1 || h < 0 || h > 24 || m < 0 || m > 59)
        throw InputError("expected HH[:MM], got '" + text + "'");
    return h + m / 60.0;
}

struct Window {
    double start = 0.0;
    double end = 0.0;
};

Window parse_window(const std::string& text) {
    const auto dash = text.find('-');
    if (dash == std::string::npos)
        throw InputError("expected start-end window like 7-19, got '" + text + "'");
    Window w;
    w.start = parse_clock(text.substr(0, dash));
    w.end = parse_clock(text.substr(dash + 1));
    if (w.end <= w.start) throw InputError("window '" + text + "' is empty");
    return w;
}

std::string window_name(const Window& w) {
    char buf[32];
    auto fmt = [&](double h) {
        const int minutes = static_cast<int>(std::lround(h * 60.0));
        std::snprintf(buf, sizeof buf, "%02dh%02d", minutes / 60, minutes % 60);
        return std::string(buf);
    };
    return fmt(w.start) + "-" + fmt(w.end);
}

// Site options shared by the ephemeris-driven commands: explicit
// coordinates, or borrowed from an EPW header.
struct SiteArgs {
    double lat = 0.0, lon = 0.0, utc = 0.0;
    bool lat_set = false, lon_set = false, utc_set = false;
    std::string epw;

    void add_to(CLI::App* cmd, bool epw_too = true) {
        cmd->add_option("--lat", lat, "Site latitude, degrees north")
            ->check(CLI::Range(-90.0, 90.0))
            ->each([this](const std::string&) { lat_set = true; });
        cmd->add_option("--lon", lon, "Site longitude, degrees east")
            ->check(CLI::Range(-180.0, 180.0))
            ->each([this](const std::string&) { lon_set = true; });
        cmd->add_option("--utc-offset", utc, "Hours ahead of UTC")
            ->each([this](const std::string&) { utc_set = true; });
        if (epw_too)
            cmd->add_option("--site-from-epw", epw, "Take lat/lon/utc from an EPW header");
    }

    solar::SitePosition resolve() const {
        if (!epw.empty()) {
            if (lat_set || lon_set || utc_set)
                throw InputError("give either --site-from-epw or explicit coordinates, not both");
            const auto table = weather::parse_epw_file(epw, false);
            return table.site();
        }
        if (!lat_set || !lon_set || !utc_set)
            throw InputError("site needs --lat, --lon and --utc-offset (or --site-from-epw)");
        return {lat, lon, utc};
    }

    std::string canonical() const {
        if (!epw.empty()) return "site-from-epw=" + epw;
        char buf[96];
        std::snprintf(buf, sizeof buf, "lat=%.6f;lon=%.6f;utc=%.2f", lat, lon, utc);
        return buf;
    }
};

// Picks the period year whose leapness matches the table contents, so
// typical-year files with mixed record years still resolve.
int table_year(const weather::WeatherTable& table) {
    const bool has_feb29 = table.find(2, 29, 1) != nullptr;
    int year = table.records.empty() ? 2019 : table.records.front().year;
    for (int i = 0; i < 8; ++i, ++year)
        if (is_leap_year(year) == has_feb29) return year;
    return year;
}

void print_metrics_row(std::ostream& os, const std::string& id, const val::ValidationMetrics& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %4d %8.4f %10.3f %10.3f", id.c_str(), m.n, m.rho,
                  m.mae, m.rmse);
    os << buf << "\n";
}

struct CommonOut {
    std::string dir = ".";
    uint64_t seed = 1;
    unsigned threads = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--out", dir, "Output directory")->capture_default_str();
        cmd->add_option("--seed", seed, "RNG seed recorded in outputs")->capture_default_str();
        cmd->add_option("--threads", threads, "Worker threads (0 = hardware)")
            ->capture_default_str();
    }
};

int run_cli(int argc, char** argv) {
    CLI::App app{std::string("parsol ") + kVersion +
                 " - facade PAR/DLI simulation for urban farming site selection"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file (key=value; [subcommand] sections)");
    app.set_version_flag("--version", std::string(kVersion));

    // ---- build-model -------------------------------------------------------
    auto* cmd_build = app.add_subcommand("build-model", "Extrude footprints into a scene file");
    struct {
        std::string footprints, stairsteps, output = "scene.json";
        double level1 = 3.6, floor = 2.8, albedo = 0.0;
    } bm;
    cmd_build->add_option("--footprints", bm.footprints, "Footprint JSON")->required();
    cmd_build->add_option("--stairsteps", bm.stairsteps,
                          "CSV name,step_height,counts... overriding level heights");
    cmd_build->add_option("--level1-height", bm.level1, "First-level height, m")
        ->capture_default_str();
    cmd_build->add_option("--floor-height", bm.floor, "Upper-floor height, m")
        ->capture_default_str();
    cmd_build->add_option("--ground-albedo", bm.albedo, "Ground reflectance")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_build->add_option("--output", bm.output, "Scene file to write")->capture_default_str();
    cmd_build->callback([&] {
        const auto specs = sceneio::load_footprints(bm.footprints);
        std::map<std::string, sceneio::StairstepEntry> stairs;
        if (!bm.stairsteps.empty()) stairs = sceneio::load_stairsteps(bm.stairsteps);
        const auto scene = sceneio::build_scene(specs, stairs, bm.level1, bm.floor, bm.albedo);
        sceneio::save_scene(bm.output, scene);
        std::cout << "building        height_m  triangles\n";
        for (const auto& b : scene.buildings) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%-15s %8.2f %10zu", b.name.c_str(), b.height,
                          b.triangles.size());
            std::cout << buf << "\n";
        }
        std::cout << "wrote " << bm.output << "\n";
    });

    // ---- sunpath -----------------------------------------------------------
    auto* cmd_sun = app.add_subcommand("sunpath", "Sun azimuth/elevation over a day");
    struct {
        SiteArgs site;
        std::string date;
        double step = 60.0;
        std::string output = "sunpath.csv";
    } sp;
    sp.site.add_to(cmd_sun);
    cmd_sun->add_option("--date", sp.date, "Civil date YYYY-MM-DD")->required();
    cmd_sun->add_option("--step", sp.step, "Step in minutes")->capture_default_str();
    cmd_sun->add_option("--output", sp.output, "CSV to write")->capture_default_str();
    cmd_sun->callback([&] {
        const auto site = sp.site.resolve();
        const Date date = parse_date(sp.date);
        const auto samples = solar::sun_path(site, date, sp.step);
        std::ofstream out(sp.output);
        if (!out) throw InputError("cannot write '" + sp.output + "'");
        out << "time,azimuth,elevation\n";
        char buf[96];
        for (const auto& s : samples) {
            const int minutes = static_cast<int>(std::lround(s.hour * 60.0));
            std::snprintf(buf, sizeof buf, "%02d:%02d,%.4f,%.4f", minutes / 60, minutes % 60,
                          s.sun.azimuth, s.sun.elevation);
            out << buf << "\n";
        }
        std::cout << "wrote " << sp.output << " (" << samples.size() << " samples)\n";
    });

    // ---- shadowmap ---------------------------------------------------------
    auto* cmd_shadow = app.add_subcommand("shadowmap", "Sunlit fraction per facade cell");
    struct {
        std::string scene, facade, date, at;
        SiteArgs site;
        std::vector<std::string> windows;
        double step = 10.0;
        int rows = 16, cols = 16;
        double offset = 0.01;
        bool ppm = false;
        CommonOut out;
    } sm;
    cmd_shadow->add_option("--scene", sm.scene, "Scene JSON from build-model")->required();
    cmd_shadow->add_option("--facade", sm.facade, "Facade label or building:edge")->required();
    cmd_shadow->add_option("--date", sm.date, "Civil date YYYY-MM-DD")->required();
    sm.site.add_to(cmd_shadow);
    cmd_shadow->add_option("--window", sm.windows, "Time window like 7-19 (repeatable)");
    cmd_shadow->add_option("--at", sm.at, "Single instant HH:MM for a binary map");
    cmd_shadow->add_option("--step", sm.step, "Sample step, minutes")->capture_default_str();
    cmd_shadow->add_option("--rows", sm.rows, "Grid rows")->capture_default_str();
    cmd_shadow->add_option("--cols", sm.cols, "Grid columns")->capture_default_str();
    cmd_shadow->add_option("--offset", sm.offset, "Cell offset off the facade, m")
        ->capture_default_str();
    cmd_shadow->add_flag("--ppm", sm.ppm, "Also write heatmap PPMs");
    sm.out.add_to(cmd_shadow);
    cmd_shadow->callback([&] {
        if (sm.windows.empty() && sm.at.empty())
            throw InputError("give at least one --window or an --at instant");
        const auto scene = sceneio::load_scene(sm.scene);
        const auto site = sm.site.resolve();
        const Date date = parse_date(sm.date);
        const auto ref = sceneio::resolve_facade(scene, sm.facade);
        const auto facade = city::extract_facade(scene.building(ref.building), ref.edge_index);
        const auto grid = city::grid_facade(facade, sm.rows, sm.cols, sm.offset);

        const std::string base = "shadow_" + sanitize(sm.facade) + "_" + sanitize(sm.date);
        mapio::OutputMeta meta;
        meta.seed = sm.out.seed;

        for (const auto& wtext : sm.windows) {
            const Window w = parse_window(wtext);
            meta.config_hash = mapio::hash_config(
                "cmd=shadowmap;scene=" + sm.scene + ";facade=" + sm.facade + ";date=" + sm.date +
                ";window=" + wtext + ";step=" + std::to_string(sm.step) + ";" +
                sm.site.canonical());
            const auto map = rad::shadow_map(scene, grid, site, date, w.start, w.end, sm.step,
                                             sm.out.threads);
            const auto csv = out_path(sm.out.dir, base + "_" + window_name(w) + ".csv");
            mapio::write_shadow_csv(csv, map, meta);
            std::cout << "wrote " << csv;
            if (map.no_sun_cells > 0)
                std::cout << "  (warning: " << map.no_sun_cells
                          << " cells saw no above-horizon samples)";
            std::cout << "\n";
            if (sm.ppm)
                mapio::write_ppm(out_path(sm.out.dir, base + "_" + window_name(w) + ".ppm"),
                                 grid.rows, grid.cols, map.values, 1.0);
        }
        if (!sm.at.empty()) {
            const double hour = parse_clock(sm.at);
            const auto sun = solar::sun_position(site, DateTime{date, hour});
            std::vector<double> lit(grid.cells.size(), 0.0);
            for (size_t i = 0; i < grid.cells.size(); ++i)
                lit[i] = rad::cell_sunlit(scene, grid.cells[i], sun) ? 1.0 : 0.0;
            meta.config_hash = mapio::hash_config(
                "cmd=shadowmap;scene=" + sm.scene + ";facade=" + sm.facade + ";date=" + sm.date +
                ";at=" + sm.at + ";" + sm.site.canonical());
            rad::ShadowMap map;
            map.grid = grid;
            map.date = date;
            map.window_start = map.window_end = hour;
            map.values = lit;
            const auto csv = out_path(sm.out.dir, base + "_at" + sanitize(sm.at) + ".csv");
            mapio::write_shadow_csv(csv, map, meta);
            std::cout << "wrote " << csv << "\n";
            if (sm.ppm)
                mapio::write_ppm(out_path(sm.out.dir, base + "_at" + sanitize(sm.at) + ".ppm"),
                                 grid.rows, grid.cols, lit, 1.0);
        }
    });

    // ---- par ---------------------------------------------------------------
    auto* cmd_par = app.add_subcommand("par", "Instantaneous PAR map, or an hourly PAR series");
    struct {
        std::string scene, facade, date, time, sky, schedule;
        SiteArgs site;
        double albedo = 0.0, turbidity = 2.75;
        int samples = 1024, rows = 16, cols = 16;
        double offset = 0.01;
        bool series = false, ppm = false;
        std::string cell, epw, to, label;
        int start_hour = 7, end_hour = 19;
        CommonOut out;
    } pa;
    cmd_par->add_option("--scene", pa.scene, "Scene JSON")->required();
    cmd_par->add_option("--facade", pa.facade, "Facade label or building:edge")->required();
    cmd_par->add_option("--date", pa.date, "Civil date YYYY-MM-DD")->required();
    pa.site.add_to(cmd_par);
    cmd_par->add_option("--time", pa.time, "Instant HH:MM (map mode)");
    cmd_par->add_option("--sky", pa.sky, "Skytype: sunny, partly-cloudy or cloudy");
    cmd_par->add_option("--schedule", pa.schedule, "Skytype schedule CSV (date,segment,category)");
    cmd_par->add_option("--albedo", pa.albedo, "Ground reflectance")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_par->add_option("--turbidity", pa.turbidity, "Atmospheric turbidity")
        ->capture_default_str();
    cmd_par->add_option("--samples", pa.samples, "Hemisphere samples per cell")
        ->capture_default_str();
    cmd_par->add_option("--rows", pa.rows, "Grid rows")->capture_default_str();
    cmd_par->add_option("--cols", pa.cols, "Grid columns")->capture_default_str();
    cmd_par->add_option("--offset", pa.offset, "Cell offset, m")->capture_default_str();
    cmd_par->add_flag("--ppm", pa.ppm, "Also write a heatmap PPM (map mode)");
    cmd_par->add_flag("--series", pa.series, "Hourly series mode (needs --cell and --epw)");
    cmd_par->add_option("--cell", pa.cell, "Grid cell row,col (series mode)");
    cmd_par->add_option("--epw", pa.epw, "EPW weather file (series mode)");
    cmd_par->add_option("--to", pa.to, "Last date of the series (default: --date)");
    cmd_par->add_option("--label", pa.label, "Series label (join key for validate)");
    cmd_par->add_option("--start-hour", pa.start_hour, "First hour of day window")
        ->capture_default_str();
    cmd_par->add_option("--end-hour", pa.end_hour, "One past the last hour")
        ->capture_default_str();
    pa.out.add_to(cmd_par);
    cmd_par->callback([&] {
        const auto scene = sceneio::load_scene(pa.scene);
        const auto ref = sceneio::resolve_facade(scene, pa.facade);
        const auto facade = city::extract_facade(scene.building(ref.building), ref.edge_index);
        const auto grid = city::grid_facade(facade, pa.rows, pa.cols, pa.offset);
        const Date date = parse_date(pa.date);
        mapio::OutputMeta meta;
        meta.seed = pa.out.seed;

        if (pa.series) {
            if (pa.cell.empty() || pa.epw.empty())
                throw InputError("series mode needs --cell and --epw");
            int row = 0, col = 0;
            if (std::sscanf(pa.cell.c_str(), "%d,%d", &row, &col) != 2)
                throw InputError("cell must be row,col");
            const auto& cell = grid.at(row, col);
            const auto table = weather::parse_epw_file(pa.epw);
            const bool site_given = !pa.site.epw.empty() || pa.site.lat_set ||
                                    pa.site.lon_set || pa.site.utc_set;
            const auto site = site_given ? pa.site.resolve() : table.site();
            const Date last = pa.to.empty() ? date : parse_date(pa.to);
            // The label lands in a comma-separated file and is the join key
            // for validate, so it must stay comma-free.
            if (pa.label.find(',') != std::string::npos)
                throw InputError("--label must not contain commas");
            const std::string label =
                pa.label.empty() ? sanitize(pa.facade) + "_" + std::to_string(row) + "-" +
                                       std::to_string(col)
                                 : pa.label;
            const double svf = rad::sky_view_factor(
                scene, cell, pa.samples,
                cell_seed(pa.out.seed, static_cast<uint64_t>(row), static_cast<uint64_t>(col)));

            std::vector<mapio::SeriesPoint> points;
            for (Date d = date;; d = next_day(d)) {
                for (int h = pa.start_hour; h < pa.end_hour; ++h) {
                    const auto* rec = table.find(d.month, d.day, h + 1);
                    if (!rec)
                        throw InputError("EPW has no record for hour " + std::to_string(h + 1));
                    weather::IrradianceComponents comps;
                    if (rec->dni && rec->dhi) {
                        comps.dni = *rec->dni;
                        comps.dhi = *rec->dhi;
                        const auto sun = solar::sun_position(site, DateTime{d, h + 0.5});
                        const double sin_e = std::max(0.0, std::sin(deg2rad(sun.elevation)));
                        comps.ghi = rec->ghi.value_or(comps.dni * sin_e + comps.dhi);
                        const double e = rad::instantaneous_irradiance(scene, cell, sun, comps,
                                                                       pa.albedo, svf);
                        points.push_back({label, DateTime{d, static_cast<double>(h)},
                                          rad::par_from_irradiance(e)});
                    } else {
                        points.push_back({label, DateTime{d, static_cast<double>(h)}, 0.0});
                    }
                }
                if (d == last) break;
            }
            meta.config_hash = mapio::hash_config(
                "cmd=par-series;scene=" + pa.scene + ";facade=" + pa.facade + ";cell=" + pa.cell +
                ";epw=" + pa.epw + ";date=" + pa.date + ";to=" + pa.to +
                ";albedo=" + std::to_string(pa.albedo) + ";samples=" +
                std::to_string(pa.samples));
            const auto csv = out_path(pa.out.dir, "par_series_" + sanitize(label) + ".csv");
            mapio::write_series_csv(csv, points, meta, "par");
            std::cout << "wrote " << csv << " (" << points.size() << " points)\n";
            return;
        }

        if (pa.time.empty()) throw InputError("map mode needs --time (or use --series)");
        const DateTime instant{date, parse_clock(pa.time)};
        const auto site = pa.site.resolve();
        weather::SkyCondition sky;
        if (!pa.schedule.empty()) {
            sky = weather::load_sky_schedule(pa.schedule).lookup(instant);
        } else if (!pa.sky.empty()) {
            if (pa.sky == "sunny") sky = weather::SkyCondition::Sunny;
            else if (pa.sky == "partly-cloudy") sky = weather::SkyCondition::PartlyCloudy;
            else if (pa.sky == "cloudy") sky = weather::SkyCondition::Cloudy;
            else sky = weather::classify_skytype(pa.sky);
        } else {
            throw InputError("map mode needs --sky or --schedule");
        }

        const auto map = rad::par_map(scene, grid, site, instant, sky, pa.albedo, pa.turbidity,
                                      pa.samples, pa.out.seed, pa.out.threads);
        meta.config_hash = mapio::hash_config(
            "cmd=par;scene=" + pa.scene + ";facade=" + pa.facade + ";date=" + pa.date +
            ";time=" + pa.time + ";sky=" + weather::to_string(sky) +
            ";albedo=" + std::to_string(pa.albedo) + ";turbidity=" +
            std::to_string(pa.turbidity) + ";samples=" + std::to_string(pa.samples) + ";" +
            pa.site.canonical());
        const std::string base =
            "par_" + sanitize(pa.facade) + "_" + sanitize(pa.date) + "_" + sanitize(pa.time);
        const auto csv = out_path(pa.out.dir, base + ".csv");
        mapio::write_map_csv(csv, grid, map.values, meta, "par", 3);
        std::cout << "wrote " << csv << " (sky " << weather::to_string(sky) << ")\n";
        if (pa.ppm) mapio::write_ppm(out_path(pa.out.dir, base + ".ppm"), grid.rows, grid.cols,
                                     map.values);
    });

    // ---- dli ---------------------------------------------------------------
    auto* cmd_dli = app.add_subcommand("dli", "Cumulative-radiation DLI map per facade");
    struct {
        std::string scene, epw;
        std::vector<std::string> facades;
        int month = 0;
        bool annual = false;
        double albedo = 0.0, threshold = 9.0;
        int samples = 1024, rows = 16, cols = 16;
        double offset = 0.01;
        bool ppm = false;
        CommonOut out;
    } dl;
    cmd_dli->add_option("--scene", dl.scene, "Scene JSON")->required();
    cmd_dli->add_option("--epw", dl.epw, "EPW weather file")->required();
    cmd_dli->add_option("--facade", dl.facades,
                        "Facade label or building:edge (repeatable; default: all labeled)");
    cmd_dli->add_option("--month", dl.month, "Calendar month 1-12")->check(CLI::Range(1, 12));
    cmd_dli->add_flag("--annual", dl.annual, "Whole-year period");
    cmd_dli->add_option("--albedo", dl.albedo, "Ground reflectance")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_dli->add_option("--threshold", dl.threshold, "Suitability threshold for the summary")
        ->capture_default_str();
    cmd_dli->add_option("--samples", dl.samples, "Hemisphere samples per cell")
        ->capture_default_str();
    cmd_dli->add_option("--rows", dl.rows, "Grid rows")->capture_default_str();
    cmd_dli->add_option("--cols", dl.cols, "Grid columns")->capture_default_str();
    cmd_dli->add_option("--offset", dl.offset, "Cell offset, m")->capture_default_str();
    cmd_dli->add_flag("--ppm", dl.ppm, "Also write heatmap PPMs");
    dl.out.add_to(cmd_dli);
    cmd_dli->callback([&] {
        if (dl.annual == (dl.month != 0))
            throw InputError("give exactly one of --month or --annual");
        const auto scene = sceneio::load_scene(dl.scene);
        const auto table = weather::parse_epw_file(dl.epw);

        std::vector<std::string> facades = dl.facades;
        if (facades.empty()) {
            for (const auto& b : scene.buildings)
                for (const auto& [label, edge] : b.facade_labels) facades.push_back(label);
            std::sort(facades.begin(), facades.end());
            if (facades.empty())
                throw InputError("scene has no labeled facades; pass --facade explicitly");
        }

        const int year = table_year(table);
        const rad::Period period =
            dl.annual ? rad::year_period(year) : rad::month_period(year, dl.month);
        const std::string period_name =
            dl.annual ? "annual" : "month" + std::to_string(dl.month);

        std::cout << "facade  min_dli max_dli  levels_above_" << dl.threshold << "\n";
        for (const auto& fspec : facades) {
            const auto ref = sceneio::resolve_facade(scene, fspec);
            const auto facade =
                city::extract_facade(scene.building(ref.building), ref.edge_index);
            const auto grid = city::grid_facade(facade, dl.rows, dl.cols, dl.offset);
            const auto map = rad::dli_map(scene, grid, table, period, dl.albedo, dl.samples,
                                          dl.out.seed, dl.out.threads);
            mapio::OutputMeta meta;
            meta.seed = dl.out.seed;
            meta.config_hash = mapio::hash_config(
                "cmd=dli;scene=" + dl.scene + ";epw=" + dl.epw + ";facade=" + fspec +
                ";period=" + period_name + ";albedo=" + std::to_string(dl.albedo) +
                ";samples=" + std::to_string(dl.samples) + ";rows=" + std::to_string(dl.rows) +
                ";cols=" + std::to_string(dl.cols));
            const std::string base = "dli_" + sanitize(fspec) + "_" + period_name;
            const auto csv = out_path(dl.out.dir, base + ".csv");
            mapio::write_dli_csv(csv, map, meta);
            if (dl.ppm)
                mapio::write_ppm(out_path(dl.out.dir, base + ".ppm"), grid.rows, grid.cols,
                                 map.values);

            const auto suit = agro::suitability_map(map, dl.threshold);
            const int min_dli = *std::min_element(map.rounded.begin(), map.rounded.end());
            const int max_dli = *std::max_element(map.rounded.begin(), map.rounded.end());
            char buf[160];
            std::snprintf(buf, sizeof buf, "%-7s %7d %7d  %s", fspec.c_str(), min_dli, max_dli,
                          agro::levels_summary(suit).c_str());
            std::cout << buf << "\n";
            if (map.missing_hours > 0)
                std::cout << "  (warning: " << map.missing_hours
                          << " hours had missing radiation and contributed zero)\n";
        }
    });

    // ---- suitability -------------------------------------------------------
    auto* cmd_suit = app.add_subcommand("suitability", "Threshold a DLI map and match crops");
    struct {
        std::string dli_csv, crops;
        double threshold = 9.0;
        bool unrounded = false;
        CommonOut out;
    } su;
    cmd_suit->add_option("--dli", su.dli_csv, "DLI CSV produced by the dli command")->required();
    cmd_suit->add_option("--crops", su.crops, "Crop CSV (name,species,min_dli,max_dli,category)");
    cmd_suit->add_option("--threshold", su.threshold, "DLI the cell must strictly exceed")
        ->capture_default_str();
    cmd_suit->add_flag("--unrounded", su.unrounded, "Compare raw instead of rounded DLI");
    su.out.add_to(cmd_suit);
    cmd_suit->callback([&] {
        const auto dli = mapio::read_dli_csv(su.dli_csv);
        const auto map = agro::suitability_map(dli, su.threshold, !su.unrounded);
        mapio::OutputMeta meta;
        meta.seed = su.out.seed;
        meta.config_hash = mapio::hash_config(
            "cmd=suitability;dli=" + su.dli_csv + ";threshold=" + std::to_string(su.threshold) +
            ";unrounded=" + (su.unrounded ? "1" : "0"));
        const auto csv = out_path(su.out.dir, "suitability.csv");
        mapio::write_suitability_csv(csv, map, meta);
        std::cout << "wrote " << csv << "\n";
        std::cout << "levels exceeding " << su.threshold << ": " << agro::levels_summary(map)
                  << "\n";

        if (!su.crops.empty()) {
            const auto crops = agro::load_crops(su.crops);
            const auto crop_csv = out_path(su.out.dir, "suitability_crops.csv");
            std::ofstream out(crop_csv);
            if (!out) throw InputError("cannot write '" + crop_csv + "'");
            out << "# parsol " << kVersion << " seed=" << meta.seed
                << " config=" << meta.config_hash << "\n";
            out << "row,col,dli,crops\n";
            for (size_t i = 0; i < map.mask.size(); ++i) {
                if (!map.mask[i]) continue;
                const auto& cell = map.grid.cells[i];
                std::string names;
                for (const auto& match : agro::suitable_crops(map.dli[i], crops)) {
                    if (!names.empty()) names += '|';
                    names += match.crop.name;
                    if (match.above_advisory_max) names += "(above max)";
                }
                char buf[64];
                std::snprintf(buf, sizeof buf, "%d,%d,%.3f,", cell.row, cell.col, map.dli[i]);
                out << buf << names << "\n";
            }
            std::cout << "wrote " << crop_csv << "\n";
        }
    });

    // ---- validate ----------------------------------------------------------
    auto* cmd_val = app.add_subcommand("validate",
                                       "Score simulated hourly PAR against sensor logs");
    struct {
        std::string measured, calibration, date, to;
        std::vector<std::string> simulated;
        bool builtin_cal = false;
        int start_hour = 7, end_hour = 19;
        CommonOut out;
    } va;
    cmd_val->add_option("--measured", va.measured, "Sensor log CSV (sensor_id,timestamp,par)")
        ->required();
    cmd_val->add_option("--simulated", va.simulated,
                        "Series CSV (label,timestamp,par); repeat for several sensors")
        ->required();
    cmd_val->add_option("--calibration", va.calibration, "Calibration CSV to apply to raw logs");
    cmd_val->add_flag("--default-calibration", va.builtin_cal,
                      "Apply the built-in sensor calibration table");
    cmd_val->add_option("--date", va.date, "First day to compare")->required();
    cmd_val->add_option("--to", va.to, "Last day (default: --date)");
    cmd_val->add_option("--start-hour", va.start_hour, "First hour")->capture_default_str();
    cmd_val->add_option("--end-hour", va.end_hour, "One past the last hour")
        ->capture_default_str();
    va.out.add_to(cmd_val);
    cmd_val->callback([&] {
        auto logs = val::load_sensor_logs(va.measured);
        if (va.builtin_cal && !va.calibration.empty())
            throw InputError("give either --calibration or --default-calibration, not both");
        std::vector<val::CalibrationEquation> cal;
        if (va.builtin_cal) cal = val::default_calibrations();
        if (!va.calibration.empty()) cal = val::load_calibrations(va.calibration);
        if (!cal.empty()) {
            for (auto& log : logs) {
                const auto& eq = val::find_calibration(cal, log.sensor_id);
                for (auto& s : log.samples) s.par = val::calibrate(eq, s.par);
            }
        }

        std::map<std::pair<std::string, long long>, double> sim;
        for (const auto& path : va.simulated) {
            for (const auto& p : mapio::read_series_csv(path)) {
                const long long key =
                    static_cast<long long>(std::llround(epoch_seconds(p.when)));
                sim[{p.label, key}] = p.value;
            }
        }

        const Date first = parse_date(va.date);
        const Date last = va.to.empty() ? first : parse_date(va.to);

        std::vector<double> all_meas, all_sim;
        std::cout << "sensor          n      rho        mae       rmse\n";
        std::vector<std::string> rows;
        for (const auto& log : logs) {
            std::vector<double> meas_series, sim_series;
            for (Date d = first;; d = next_day(d)) {
                const auto hourly = val::hourly_aggregate(log, d, va.start_hour, va.end_hour);
                for (int h = va.start_hour; h < va.end_hour; ++h) {
                    const long long key = static_cast<long long>(
                        std::llround(epoch_seconds(DateTime{d, static_cast<double>(h)})));
                    auto it = sim.find({log.sensor_id, key});
                    if (it == sim.end())
                        throw InputError("simulated series lacks " + log.sensor_id + " at " +
                                         mapio::format_timestamp(
                                             DateTime{d, static_cast<double>(h)}));
                    meas_series.push_back(hourly[static_cast<size_t>(h - va.start_hour)]);
                    sim_series.push_back(it->second);
                }
                if (d == last) break;
            }
            const auto metrics = val::compare(sim_series, meas_series);
            print_metrics_row(std::cout, log.sensor_id, metrics);
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.6f,%.6f", log.sensor_id.c_str(),
                          metrics.n, metrics.rho, metrics.mae, metrics.rmse);
            rows.push_back(buf);
            all_meas.insert(all_meas.end(), meas_series.begin(), meas_series.end());
            all_sim.insert(all_sim.end(), sim_series.begin(), sim_series.end());
        }
        if (logs.size() > 1) {
            const auto overall = val::compare(all_sim, all_meas);
            print_metrics_row(std::cout, "(pooled)", overall);
            char buf[160];
            std::snprintf(buf, sizeof buf, "(pooled),%d,%.6f,%.6f,%.6f", overall.n, overall.rho,
                          overall.mae, overall.rmse);
            rows.push_back(buf);
        }

        std::string sim_key;
        for (const auto& path : va.simulated) sim_key += path + "|";
        mapio::OutputMeta meta;
        meta.seed = va.out.seed;
        meta.config_hash = mapio::hash_config("cmd=validate;measured=" + va.measured +
                                              ";simulated=" + sim_key + ";date=" + va.date +
                                              ";to=" + va.to);
        const auto csv = out_path(va.out.dir, "validation_metrics.csv");
        std::ofstream out(csv);
        if (!out) throw InputError("cannot write '" + csv + "'");
        out << "# parsol " << kVersion << " seed=" << meta.seed << " config=" << meta.config_hash
            << "\n";
        out << "sensor_id,n,rho,mae,rmse\n";
        for (const auto& r : rows) out << r << "\n";
        std::cout << "wrote " << csv << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
