#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "parsol/rng.hpp"
#include "parsol/validation.hpp"

using namespace parsol;
using namespace parsol::val;

namespace {

SensorLog make_log(const Date& day, double (*f)(int), int count = 288) {
    SensorLog log;
    log.sensor_id = "synthetic";
    for (int i = 0; i < count; ++i) {
        const double hour = 6.0 + i * 300.0 / 3600.0;
        DateTime when{day, hour};
        if (when.hour >= 24.0) {
            when.date = next_day(day);
            when.hour -= 24.0;
        }
        log.samples.push_back({when, f(i)});
    }
    return log;
}

double const_1000(int) { return 1000.0; }

} // namespace

TEST_CASE("spearman rank correlation") {
    CHECK(spearman_rho({1, 2, 3, 4, 5}, {10, 20, 30, 40, 50}) == doctest::Approx(1.0));
    CHECK(spearman_rho({1, 2, 3, 4, 5}, {50, 40, 30, 20, 10}) == doctest::Approx(-1.0));
    // Two adjacent swaps: rank distances sum to 4, rho = 1 - 24/120 = 0.8
    CHECK(spearman_rho({1, 2, 3, 4, 5}, {1, 3, 2, 5, 4}) == doctest::Approx(0.8));
    // Ties get averaged ranks
    CHECK(spearman_rho({1, 2, 2, 3}, {10, 20, 20, 30}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(spearman_rho({1, 2}, {1, 2}), InputError);
    CHECK_THROWS_AS(spearman_rho({1, 2, 3}, {1, 2}), InputError);
    CHECK_THROWS_AS(spearman_rho({5, 5, 5, 5}, {1, 2, 3, 4}), ComputeError);
}

TEST_CASE("spearman is invariant under monotone transforms") {
    SplitMix64 rng(4242u);
    for (int k = 0; k < 100; ++k) {
        std::vector<double> a, b;
        for (int i = 0; i < 15; ++i) {
            a.push_back(rng.next_double() * 100.0);
            b.push_back(rng.next_double() * 100.0);
        }
        const double base = spearman_rho(a, b);
        std::vector<double> ea, lb;
        for (double v : a) ea.push_back(std::exp(v / 50.0));
        for (double v : b) lb.push_back(3.0 * v + 7.0);
        CHECK(spearman_rho(ea, lb) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("error statistics") {
    const auto s = mae_rmse({1, 2, 3}, {2, 2, 5});
    CHECK(s.mae == doctest::Approx(1.0));
    CHECK(s.rmse == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK_THROWS_AS(mae_rmse({1}, {1, 2}), InputError);

    SplitMix64 rng(99u);
    for (int k = 0; k < 1000; ++k) {
        std::vector<double> a, b;
        for (int i = 0; i < 12; ++i) {
            a.push_back(rng.next_double() * 50.0);
            b.push_back(rng.next_double() * 50.0);
        }
        const auto st = mae_rmse(a, b);
        CHECK(st.mae <= st.rmse + 1e-12);
    }
}

TEST_CASE("percent reduction reproduces the field survey rows") {
    struct Row {
        double unshaded, shaded, expect;
    };
    const Row rows[] = {
        {568, 259, 54.40}, {653, 341, 47.77}, {570, 256, 55.08}, {434, 240, 44.70},
        {606, 84, 86.13},  {130, 85, 34.61},  {151, 98, 35.09},  {145, 90, 37.93},
        {90, 56, 37.77},   {146, 63, 56.84},
    };
    for (const auto& r : rows)
        CHECK(std::abs(percent_reduction(r.unshaded, r.shaded) - r.expect) <= 0.01 + 1e-9);
    CHECK_THROWS_AS(percent_reduction(0.0, 0.0), InputError);
    CHECK_THROWS_AS(percent_reduction(100.0, 150.0), InputError);
    CHECK_THROWS_AS(percent_reduction(100.0, -5.0), InputError);
}

TEST_CASE("measured dli integrates a full sensor day") {
    const Date day{2019, 3, 17};
    const auto log = make_log(day, const_1000);
    CHECK(measured_dli(log, day) == doctest::Approx(86.4).epsilon(1e-12));
}

TEST_CASE("measured dli refuses gappy days") {
    const Date day{2019, 3, 17};
    auto log = make_log(day, const_1000);
    log.samples.erase(log.samples.begin() + 100);
    try {
        measured_dli(log, day);
        FAIL("expected a gap error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
}

TEST_CASE("calibration equations scale and clamp") {
    CalibrationEquation eq{"x", 0.9918, 79.884, 0.9};
    CHECK(calibrate(eq, 100.0) == doctest::Approx(0.9918 * 100 + 79.884));
    CalibrationEquation neg{"y", 1.0, -50.0, 0.9};
    CHECK(calibrate(neg, 20.0) == 0.0); // clamped at zero
    CHECK_THROWS_AS(calibrate(eq, -1.0), InputError);
    CalibrationEquation bad{"z", -0.5, 0.0, 0.9};
    CHECK_THROWS_AS(calibrate(bad, 10.0), InputError);
}

TEST_CASE("built-in calibration table") {
    const auto table = default_calibrations();
    CHECK(table.size() == 10);
    const auto& eq = find_calibration(table, "2258-3");
    CHECK(eq.a == doctest::Approx(0.9918));
    CHECK(eq.b == doctest::Approx(79.884));
    CHECK(eq.r_squared == doctest::Approx(0.9034));
    CHECK(find_calibration(table, "8986-4").a == doctest::Approx(1.0154));
    CHECK_THROWS_AS(find_calibration(table, "0000"), InputError);
    for (const auto& e : table) {
        CHECK(e.r_squared > 0.89);
        CHECK(e.a > 0.8);
        CHECK(e.a < 1.1);
    }
}

TEST_CASE("sensor log loading groups by sensor and validates spacing") {
    const std::string path = "test_log_tmp.csv";
    {
        std::ofstream out(path);
        out << "sensor_id,timestamp,par\n";
        out << "s2,2019-03-17T06:00:00,10\n";
        out << "s1,2019-03-17T06:00:00,1\n";
        out << "s2,2019-03-17T06:05:00,20\n";
        out << "s1,2019-03-17T06:05:00,2\n";
    }
    const auto logs = load_sensor_logs(path);
    std::remove(path.c_str());
    REQUIRE(logs.size() == 2);
    CHECK(logs[0].sensor_id == "s2"); // first-seen order
    CHECK(logs[1].sensor_id == "s1");
    CHECK(logs[0].samples.size() == 2);
    CHECK(logs[0].samples[1].par == doctest::Approx(20.0));

    {
        std::ofstream out(path);
        out << "sensor_id,timestamp,par\n";
        out << "s1,2019-03-17T06:00:00,1\n";
        out << "s1,2019-03-17T06:04:00,2\n"; // 240 s, not 300
    }
    CHECK_THROWS_AS(load_sensor_logs(path), InputError);
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "sensor_id,timestamp,par\n";
        out << "s1,2019-03-17T06:00:00,-4\n";
    }
    CHECK_THROWS_AS(load_sensor_logs(path), InputError);
    std::remove(path.c_str());
}

TEST_CASE("hourly aggregation averages twelve samples per hour") {
    const Date day{2019, 3, 17};
    // par value = sample index, so each hourly mean is analytic
    auto log = make_log(day, [](int i) { return static_cast<double>(i); });
    const auto hours = hourly_aggregate(log, day, 7, 19);
    REQUIRE(hours.size() == 12);
    // Hour 7 covers samples 12..23: mean 17.5
    CHECK(hours[0] == doctest::Approx(17.5));
    CHECK(hours[11] == doctest::Approx(17.5 + 11 * 12));

    auto gappy = make_log(day, const_1000);
    gappy.samples.erase(gappy.samples.begin() + 15); // inside hour 7
    CHECK_THROWS_AS(hourly_aggregate(gappy, day, 7, 19), InputError);
}

TEST_CASE("metric bundle ties the pieces together") {
    const std::vector<double> sim{100, 200, 300, 400, 500, 450};
    const std::vector<double> meas{110, 190, 320, 380, 520, 440};
    const auto m = compare(sim, meas);
    CHECK(m.n == 6);
    CHECK(m.rho == doctest::Approx(1.0));
    CHECK(m.mae > 0.0);
    CHECK(m.rmse >= m.mae);
}
