// Release gate: every numbered requirement below prints one PASS/FAIL line.
// The process exits with the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>

#include "parsol/citymodel.hpp"
#include "parsol/radiation.hpp"
#include "parsol/rng.hpp"
#include "parsol/sceneio.hpp"
#include "parsol/solarpos.hpp"
#include "parsol/validation.hpp"
#include "parsol/weather.hpp"

namespace fs = std::filesystem;
using namespace parsol;

namespace {

int failures = 0;

void report(int num, bool ok, const std::string& what, const std::string& detail = "") {
    std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", num, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

template <typename Fn>
void criterion(int num, const std::string& what, Fn&& fn) {
    try {
        std::string detail;
        const bool ok = fn(detail);
        report(num, ok, what, detail);
    } catch (const std::exception& e) {
        report(num, false, what, std::string("threw: ") + e.what());
    }
}

double az_diff(double a, double b) {
    const double d = std::abs(a - b);
    return d > 180.0 ? 360.0 - d : d;
}

city::BuildingPrism box(double x0, double y0, double x1, double y1, double h) {
    city::Footprint fp;
    fp.name = "box";
    fp.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    return city::extrude(city::normalize_footprint(fp), h);
}

// All-triangle occlusion with no spatial filtering: the reference the
// accelerated path must match.
bool brute_occluded(const city::CityScene& scene, const Vec3& origin, const Vec3& dir) {
    for (const auto& b : scene.buildings)
        for (const auto& tri : b.triangles)
            if (ray_triangle(origin, dir, tri, 1e-6) >= 0.0) return true;
    if (scene.has_ground && dir.z < 0.0 && origin.z > 0.0) return true;
    return false;
}

struct BruteFraction {
    double fraction = 0.0;
    int denom = 0;
};

BruteFraction brute_shadow_fraction(const city::CityScene& scene, const city::GridCell& cell,
                                    const solar::SitePosition& site, const Date& date,
                                    double start, double end, double step_minutes) {
    BruteFraction out;
    int lit = 0;
    const double step_h = step_minutes / 60.0;
    for (int k = 0; start + (k + 1) * step_h <= end + 1e-9; ++k) {
        const double t = start + (k + 0.5) * step_h;
        const auto sun = solar::sun_position(site, {date, t});
        if (!sun.above_horizon()) continue;
        ++out.denom;
        if (dot(cell.normal, sun.unit_dir) > 0.0 &&
            !brute_occluded(scene, cell.centroid, sun.unit_dir))
            ++lit;
    }
    if (out.denom > 0) out.fraction = static_cast<double>(lit) / out.denom;
    return out;
}

std::string data_path(const std::string& name) {
    return std::string(PARSOL_DATA_DIR) + "/" + name;
}

} // namespace

// ---- criteria ---------------------------------------------------------------

static void c1_conversions() {
    criterion(1, "PAR and DLI conversion factors are exact", [](std::string& detail) {
        const double par = rad::par_from_irradiance(1.0);
        const double dli = rad::dli_from_daily_kwh(1.0);
        char buf[96];
        std::snprintf(buf, sizeof buf, "2.02 err %.1e, 7.272 err %.1e", std::abs(par - 2.02),
                      std::abs(dli - 7.272));
        detail = buf;
        return std::abs(par - 2.02) < 1e-12 && std::abs(dli - 7.272) < 1e-12;
    });
}

static void c2_percent_reduction() {
    criterion(2, "percent reduction reproduces the ten survey rows", [](std::string& detail) {
        const double rows[][3] = {
            {568, 259, 54.40}, {653, 341, 47.77}, {570, 256, 55.08}, {434, 240, 44.70},
            {606, 84, 86.13},  {130, 85, 34.61},  {151, 98, 35.09},  {145, 90, 37.93},
            {90, 56, 37.77},   {146, 63, 56.84},
        };
        double worst = 0.0;
        for (const auto& r : rows)
            worst = std::max(worst, std::abs(val::percent_reduction(r[0], r[1]) - r[2]));
        char buf[64];
        std::snprintf(buf, sizeof buf, "worst |err| %.4f (limit 0.01)", worst);
        detail = buf;
        return worst <= 0.01 + 1e-9;
    });
}

static void c3_ephemeris() {
    criterion(3, "sun position tracks the frozen reference ephemeris",
              [](std::string& detail) {
                  struct Case {
                      double lat, lon, utc;
                      int y, m, d;
                      double hour, elev, azim;
                  };
                  const Case cases[] = {
                      {1.35, 103.7, 8, 2020, 3, 2, 10.0, 40.066828, 100.423064},
                      {1.35, 103.7, 8, 2020, 3, 2, 13.0, 80.574009, 152.831539},
                      {1.35, 103.7, 8, 2020, 4, 5, 10.0, 42.906665, 82.789315},
                      {1.35, 103.7, 8, 2020, 4, 5, 13.0, 84.730625, 21.687870},
                      {1.35, 103.7, 8, 2020, 1, 15, 9.0, 23.969743, 114.030984},
                      {1.35, 103.7, 8, 2020, 2, 29, 16.0, 48.514403, 256.692716},
                      {1.35, 103.7, 8, 2020, 3, 17, 10.0, 41.559853, 92.825299},
                      {1.35, 103.7, 8, 2020, 3, 17, 16.0, 48.288364, 266.802346},
                      {1.35, 103.7, 8, 2020, 6, 21, 10.0, 39.627897, 60.196354},
                      {1.35, 103.7, 8, 2020, 7, 4, 15.0, 55.678830, 310.817220},
                      {1.35, 103.7, 8, 2020, 9, 22, 9.0, 30.511676, 90.560604},
                      {1.35, 103.7, 8, 2020, 12, 21, 12.0, 60.815518, 149.102229},
                      {40.0, -105.0, -7, 2020, 1, 15, 12.0, 28.847528, 177.515730},
                      {40.0, -105.0, -7, 2020, 6, 21, 12.0, 73.428735, 178.413873},
                      {40.0, -105.0, -7, 2020, 9, 22, 8.0, 23.838440, 111.800098},
                      {40.0, -105.0, -7, 2020, 11, 8, 15.0, 17.064633, 229.115343},
                      {52.5, 13.4, 1, 2020, 2, 14, 10.0, 17.714039, 143.947720},
                      {52.5, 13.4, 1, 2020, 6, 21, 13.0, 59.308303, 203.703529},
                      {52.5, 13.4, 1, 2020, 10, 31, 12.0, 23.134563, 182.646265},
                      {-33.9, 151.2, 10, 2020, 1, 15, 14.0, 61.538182, 288.920256},
                      {-33.9, 151.2, 10, 2020, 6, 21, 12.0, 32.659055, 359.187600},
                      {-33.9, 151.2, 10, 2020, 12, 21, 9.0, 50.891192, 86.161017},
                      {67.0, 25.0, 2, 2020, 6, 21, 12.0, 46.300082, 172.723700},
                      {67.0, 25.0, 2, 2020, 3, 20, 12.0, 22.927977, 172.578937},
                  };
                  double worst_e = 0.0, worst_a = 0.0;
                  int n = 0;
                  for (const auto& c : cases) {
                      const auto sun = solar::sun_position({c.lat, c.lon, c.utc},
                                                           {{c.y, c.m, c.d}, c.hour});
                      worst_e = std::max(worst_e, std::abs(sun.elevation - c.elev));
                      worst_a = std::max(worst_a, az_diff(sun.azimuth, c.azim));
                      ++n;
                  }
                  char buf[112];
                  std::snprintf(buf, sizeof buf,
                                "%d instants, worst elev err %.3f deg, worst az err %.3f deg", n,
                                worst_e, worst_a);
                  detail = buf;
                  return n >= 20 && worst_e < 0.5 && worst_a < 1.0;
              });
}

static void c4_shadow_oracle() {
    criterion(4, "accelerated shadow fractions match the brute-force oracle",
              [](std::string& detail) {
                  const auto t0 = std::chrono::steady_clock::now();
                  const solar::SitePosition site{1.35, 103.7, 8};
                  const Date dates[] = {{2019, 3, 17}, {2019, 6, 21}, {2019, 12, 21},
                                        {2019, 9, 22}};
                  SplitMix64 rng(20190317u);
                  double worst = 0.0;
                  int cells_checked = 0;
                  for (int s = 0; s < 25; ++s) {
                      city::CityScene scene;
                      scene.buildings.push_back(box(0, 0, 10, 6, 20.0));
                      const int n_boxes = 2 + static_cast<int>(rng.next_u64() % 4);
                      for (int b = 0; b < n_boxes; ++b) {
                          const double cx = -15.0 + 40.0 * rng.next_double();
                          const double cy = -25.0 + 17.0 * rng.next_double(); // stays south
                          const double hw = 2.0 + 4.0 * rng.next_double();
                          const double hd = 1.0 + 3.0 * rng.next_double();
                          const double h = 6.0 + 34.0 * rng.next_double();
                          scene.buildings.push_back(box(cx - hw, cy - hd, cx + hw, cy + hd, h));
                      }
                      const auto facade = city::extract_facade(scene.buildings.front(), 0);
                      const auto grid = city::grid_facade(facade, 4, 4, 0.01);
                      const Date date = dates[s % 4];
                      for (const auto& cell : grid.cells) {
                          const auto fast =
                              rad::shadow_fraction(scene, cell, site, date, 7.0, 19.0, 1.0);
                          const auto brute =
                              brute_shadow_fraction(scene, cell, site, date, 7.0, 19.0, 1.0);
                          const double quantum =
                              brute.denom > 0 ? 1.0 / brute.denom : 0.0;
                          const double diff = std::abs(fast.fraction - brute.fraction);
                          worst = std::max(worst, diff - quantum);
                          ++cells_checked;
                      }
                  }
                  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count();
                  char buf[128];
                  std::snprintf(buf, sizeof buf,
                                "25 scenes, %d cells, worst excess over one quantum %.2e, %lld ms",
                                cells_checked, worst, static_cast<long long>(ms));
                  detail = buf;
                  return worst <= 1e-12 && ms < 60000;
              });
}

static void c5_svf() {
    criterion(5, "sky view factor matches the analytic references", [](std::string& detail) {
        city::CityScene empty;
        city::GridCell vertical;
        vertical.row = vertical.col = 1;
        vertical.centroid = {0, 0, 10};
        vertical.normal = {0, -1, 0};
        vertical.area = 1.0;
        city::GridCell horizontal = vertical;
        horizontal.normal = {0, 0, 1};
        const double v = rad::sky_view_factor(empty, vertical, 1024, 1);
        const double h = rad::sky_view_factor(empty, horizontal, 1024, 1);
        char buf[96];
        std::snprintf(buf, sizeof buf, "vertical %.4f (0.5 +/- 0.02), horizontal %.4f (1 +/- 0.01)",
                      v, h);
        detail = buf;
        return std::abs(v - 0.5) <= 0.02 && std::abs(h - 1.0) <= 0.01;
    });
}

static void c6_height_trend() {
    criterion(6, "study-area DLI grows with height and favors facade W",
              [](std::string& detail) {
                  const auto t0 = std::chrono::steady_clock::now();
                  const auto specs = sceneio::load_footprints(
                      data_path("studyarea_footprints.json"));
                  const auto scene = sceneio::build_scene(specs);
                  const auto table = weather::parse_epw_file(data_path("singapore_tmy.epw"));
                  const std::vector<std::string> facades = {"W", "A", "B", "C"};

                  // March: facade means and the all-levels floor for W.
                  double means[4] = {0, 0, 0, 0};
                  double w_min_row_mean = 1e9;
                  const auto march = rad::month_period(2019, 3);
                  for (size_t f = 0; f < facades.size(); ++f) {
                      const auto ref = sceneio::resolve_facade(scene, facades[f]);
                      const auto facade =
                          city::extract_facade(scene.building(ref.building), ref.edge_index);
                      const auto grid = city::grid_facade(facade, 16, 16, 0.01);
                      const auto map = rad::dli_map(scene, grid, table, march, 0.0, 1024, 1, 0);
                      double sum = 0.0;
                      for (double v : map.values) sum += v;
                      means[f] = sum / map.values.size();
                      if (facades[f] == "W") {
                          for (int r = 1; r <= 16; ++r) {
                              double row_sum = 0.0;
                              for (int c = 1; c <= 16; ++c)
                                  row_sum += map.values[(r - 1) * 16 + (c - 1)];
                              w_min_row_mean = std::min(w_min_row_mean, row_sum / 16.0);
                          }
                      }
                  }
                  const bool w_wins =
                      means[0] > means[1] && means[0] > means[2] && means[0] > means[3];
                  const bool w_levels = w_min_row_mean > 9.0;

                  // Full year: column-wise height trend on every facade.
                  double worst_drop = 0.0;
                  const auto annual = rad::year_period(2019);
                  for (const auto& fname : facades) {
                      const auto ref = sceneio::resolve_facade(scene, fname);
                      const auto facade =
                          city::extract_facade(scene.building(ref.building), ref.edge_index);
                      const auto grid = city::grid_facade(facade, 16, 16, 0.01);
                      const auto map = rad::dli_map(scene, grid, table, annual, 0.0, 1024, 1, 0);
                      for (int c = 1; c <= 16; ++c)
                          for (int r = 1; r < 16; ++r) {
                              const double below = map.values[(r - 1) * 16 + (c - 1)];
                              const double above = map.values[r * 16 + (c - 1)];
                              worst_drop = std::max(worst_drop, below - above);
                          }
                  }
                  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count();
                  char buf[240];
                  std::snprintf(buf, sizeof buf,
                                "March means W %.2f A %.2f B %.2f C %.2f, W floor row mean %.2f, "
                                "worst annual drop %.3f (limit 1.0), %lld ms",
                                means[0], means[1], means[2], means[3], w_min_row_mean,
                                worst_drop, static_cast<long long>(ms));
                  detail = buf;
                  return w_wins && w_levels && worst_drop <= 1.0 && ms < 120000;
              });
}

static void c7_measured_dli() {
    criterion(7, "measured DLI formula and gap detection", [](std::string& detail) {
        val::SensorLog log;
        log.sensor_id = "synthetic";
        const Date day{2019, 3, 17};
        for (int i = 0; i < 288; ++i) {
            DateTime when{day, 6.0 + i * 300.0 / 3600.0};
            if (when.hour >= 24.0) {
                when.date = next_day(day);
                when.hour -= 24.0;
            }
            log.samples.push_back({when, 1000.0});
        }
        const double dli = val::measured_dli(log, day);
        bool gap_flagged = false;
        auto short_log = log;
        short_log.samples.pop_back();
        try {
            val::measured_dli(short_log, day);
        } catch (const InputError&) {
            gap_flagged = true;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "constant day -> %.10f, 287-sample day flagged: %s", dli,
                      gap_flagged ? "yes" : "no");
        detail = buf;
        return std::abs(dli - 86.4) < 1e-9 && gap_flagged;
    });
}

static void c8_statistics() {
    criterion(8, "rank statistics behave and survive monotone noise", [](std::string& detail) {
        std::vector<double> up, down;
        for (int i = 0; i < 12; ++i) {
            up.push_back(i + 1.0);
            down.push_back(12.0 - i);
        }
        const bool ends = std::abs(val::spearman_rho(up, up) - 1.0) < 1e-12 &&
                          std::abs(val::spearman_rho(up, down) + 1.0) < 1e-12;

        bool invariant = true;
        SplitMix64 rng(7101u);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> a, b;
            for (int i = 0; i < 15; ++i) {
                a.push_back(rng.next_double() * 100.0);
                b.push_back(rng.next_double() * 100.0);
            }
            std::vector<double> ea, lb;
            for (double v : a) ea.push_back(std::exp(v / 40.0));
            for (double v : b) lb.push_back(5.0 * v + 11.0);
            if (std::abs(val::spearman_rho(a, b) - val::spearman_rho(ea, lb)) > 1e-12)
                invariant = false;
        }

        bool mae_bound = true;
        for (int k = 0; k < 1000; ++k) {
            std::vector<double> a, b;
            for (int i = 0; i < 12; ++i) {
                a.push_back(rng.next_double() * 50.0);
                b.push_back(rng.next_double() * 50.0);
            }
            const auto st = val::mae_rmse(a, b);
            if (st.mae > st.rmse + 1e-12) mae_bound = false;
        }

        // A simulated hourly series, re-measured through noisy sensors, must
        // still rank-correlate strongly for almost every noise seed.
        std::vector<double> base;
        for (int i = 0; i < 12; ++i) {
            const double x = kPi * (i + 1) / 13.0;
            base.push_back(600.0 * std::sin(x) * std::sin(x));
        }
        int good = 0;
        for (uint64_t seed = 1; seed <= 100; ++seed) {
            SplitMix64 noise(seed);
            std::vector<double> meas;
            for (double v : base)
                meas.push_back(v * (0.85 + 0.3 * noise.next_double()) +
                               80.0 * (noise.next_double() - 0.5));
            if (val::spearman_rho(base, meas) > 0.5) ++good;
        }
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "endpoints %s, invariance %s, mae<=rmse %s, noisy rho>0.5 in %d/100",
                      ends ? "ok" : "BAD", invariant ? "ok" : "BAD", mae_bound ? "ok" : "BAD",
                      good);
        detail = buf;
        return ends && invariant && mae_bound && good >= 95;
    });
}

static void c9_epw() {
    criterion(9, "EPW parsing: full year, truncation and corruption", [](std::string& detail) {
        const auto table = weather::parse_epw_file(data_path("singapore_tmy.epw"));
        const bool full = table.records.size() == 8760 && std::abs(table.utc_offset - 8.0) < 1e-9;

        std::ifstream in(data_path("singapore_tmy.epw"));
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);

        bool truncated_flagged = false;
        {
            std::string text;
            for (size_t i = 0; i < 500 && i < lines.size(); ++i) text += lines[i] + "\n";
            std::istringstream trunc(text);
            try {
                weather::parse_epw(trunc, true);
            } catch (const ParseError&) {
                truncated_flagged = true;
            }
        }

        bool corrupt_flagged = false;
        int corrupt_line = 0;
        {
            auto corrupted = lines;
            // Damage the direct-normal field of the 42nd data row.
            const size_t target = 8 + 42 - 1;
            std::string& row = corrupted[target];
            size_t pos = 0;
            for (int commas = 0; commas < 14; ++pos)
                if (row[pos] == ',') ++commas;
            const size_t end = row.find(',', pos);
            row = row.substr(0, pos) + "garbage" + row.substr(end);
            std::string text;
            for (const auto& l : corrupted) text += l + "\n";
            std::istringstream corrupt(text);
            try {
                weather::parse_epw(corrupt, true);
            } catch (const ParseError& e) {
                corrupt_flagged = true;
                corrupt_line = e.line;
            }
        }
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "%zu records tz %+.1f, truncation flagged %s, corruption flagged at line %d",
                      table.records.size(), table.utc_offset, truncated_flagged ? "yes" : "no",
                      corrupt_line);
        detail = buf;
        return full && truncated_flagged && corrupt_flagged && corrupt_line == 50;
    });
}

static void c10_determinism() {
    criterion(10, "repeated dli runs are byte-identical", [](std::string& detail) {
#ifdef PARSOL_CLI
        const fs::path dir = fs::temp_directory_path() / "parsol_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        const std::string scene = (dir / "scene.json").string();
        auto sh = [](const std::string& cmd) {
            return WEXITSTATUS(std::system((cmd + " >/dev/null 2>&1").c_str()));
        };
        if (sh(std::string(PARSOL_CLI) + " build-model --footprints " +
               data_path("studyarea_footprints.json") + " --output " + scene) != 0) {
            detail = "scene build failed";
            return false;
        }
        const std::string base = std::string(PARSOL_CLI) + " dli --scene " + scene + " --epw " +
                                 data_path("singapore_tmy.epw") +
                                 " --facade W --month 3 --samples 256 --seed 5 --out ";
        if (sh(base + (dir / "run1").string()) != 0 || sh(base + (dir / "run2").string()) != 0) {
            detail = "dli run failed";
            return false;
        }
        auto slurp = [](const fs::path& p) {
            std::ifstream f(p, std::ios::binary);
            std::stringstream ss;
            ss << f.rdbuf();
            return ss.str();
        };
        const auto a = slurp(dir / "run1" / "dli_W_month3.csv");
        const auto b = slurp(dir / "run2" / "dli_W_month3.csv");
        char buf[96];
        std::snprintf(buf, sizeof buf, "two cli runs, %zu bytes each, identical: %s", a.size(),
                      a == b ? "yes" : "NO");
        detail = buf;
        return !a.empty() && a == b;
#else
        detail = "cli tool not built";
        return false;
#endif
    });
}

int main() {
    c1_conversions();
    c2_percent_reduction();
    c3_ephemeris();
    c4_shadow_oracle();
    c5_svf();
    c6_height_trend();
    c7_measured_dli();
    c8_statistics();
    c9_epw();
    c10_determinism();
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
