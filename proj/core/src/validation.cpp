#include "parsol/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "parsol/error.hpp"

namespace parsol::val {

double calibrate(const CalibrationEquation& eq, double raw) {
    if (raw < 0.0) throw InputError("raw PAR reading must be non-negative");
    if (eq.a <= 0.0) throw InputError("calibration slope must be positive");
    return std::max(0.0, eq.a * raw + eq.b);
}

std::vector<CalibrationEquation> default_calibrations() {
    return {
        {"2258-3", 0.9918, 79.884, 0.9034},  {"2558", 0.861, 98.593, 0.8953},
        {"2559", 0.9802, -28.555, 0.9009},   {"2896-5", 0.952, -18.332, 0.9021},
        {"2897-8", 0.9133, 65.485, 0.9012},  {"2902-10", 0.9448, -46.742, 0.8982},
        {"2904-9", 0.9485, 4.5319, 0.9071},  {"8982-7", 1.0185, -38.092, 0.9004},
        {"8983-6", 0.9928, 7.4332, 0.9042},  {"8986-4", 1.0154, -24.251, 0.9030},
    };
}

std::vector<CalibrationEquation> load_calibrations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open calibration file '" + path + "'");
    std::vector<CalibrationEquation> table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        std::stringstream ss(line);
        std::string id, a_s, b_s, r2_s;
        if (!std::getline(ss, id, ',') || !std::getline(ss, a_s, ',') ||
            !std::getline(ss, b_s, ',') || !std::getline(ss, r2_s))
            throw ParseError("expected sensor_id,a,b,r_squared", line_no);
        if (id == "sensor_id") continue; // header row
        CalibrationEquation eq;
        eq.sensor_id = id;
        try {
            eq.a = std::stod(a_s);
            eq.b = std::stod(b_s);
            eq.r_squared = std::stod(r2_s);
        } catch (const std::exception&) {
            throw ParseError("bad calibration coefficient", line_no);
        }
        if (eq.a <= 0.0) throw ParseError("calibration slope must be positive", line_no);
        table.push_back(eq);
    }
    if (table.empty()) throw InputError("calibration file '" + path + "' has no entries");
    return table;
}

const CalibrationEquation& find_calibration(const std::vector<CalibrationEquation>& table,
                                            const std::string& sensor_id) {
    for (const auto& eq : table)
        if (eq.sensor_id == sensor_id) return eq;
    throw InputError("no calibration for sensor '" + sensor_id + "'");
}

void validate(const SensorLog& log) {
    for (size_t i = 0; i < log.samples.size(); ++i) {
        if (log.samples[i].par < 0.0)
            throw InputError("sensor '" + log.sensor_id + "' has a negative PAR sample");
        if (i == 0) continue;
        const double dt =
            epoch_seconds(log.samples[i].when) - epoch_seconds(log.samples[i - 1].when);
        if (dt <= 0.0)
            throw InputError("sensor '" + log.sensor_id + "' timestamps are not increasing");
        if (std::abs(dt - 300.0) > 1.0)
            throw InputError("sensor '" + log.sensor_id + "' sample spacing is " +
                             std::to_string(dt) + " s, expected 300 +/- 1");
    }
}

std::vector<SensorLog> load_sensor_logs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sensor log '" + path + "'");
    std::map<std::string, SensorLog> by_sensor;
    std::vector<std::string> order;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        std::stringstream ss(line);
        std::string id, ts, par_s;
        if (!std::getline(ss, id, ',') || !std::getline(ss, ts, ',') || !std::getline(ss, par_s))
            throw ParseError("expected sensor_id,timestamp,par", line_no);
        if (id == "sensor_id") continue; // header row
        SensorSample sample;
        try {
            sample.when = parse_datetime(ts);
            sample.par = std::stod(par_s);
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad sensor sample: ") + e.what(), line_no);
        }
        auto [it, fresh] = by_sensor.try_emplace(id);
        if (fresh) {
            it->second.sensor_id = id;
            order.push_back(id);
        }
        it->second.samples.push_back(sample);
    }
    std::vector<SensorLog> logs;
    logs.reserve(order.size());
    for (const auto& id : order) {
        SensorLog& log = by_sensor[id];
        std::sort(log.samples.begin(), log.samples.end(),
                  [](const SensorSample& x, const SensorSample& y) {
                      return epoch_seconds(x.when) < epoch_seconds(y.when);
                  });
        validate(log);
        logs.push_back(std::move(log));
    }
    return logs;
}

static std::string format_instant(double epoch_s) {
    const long long day = static_cast<long long>(std::floor(epoch_s / 86400.0));
    const double sec = epoch_s - day * 86400.0;
    const auto ymd = std::chrono::year_month_day(
        std::chrono::sys_days(std::chrono::days(day)));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(sec / 3600.0), static_cast<int>(std::fmod(sec / 60.0, 60.0)));
    return buf;
}

double measured_dli(const SensorLog& log, const Date& day) {
    // Survey days run 6am to 6am; 288 five-minute means cover 24 hours.
    const double start = epoch_seconds(DateTime{day, 6.0});
    double sum = 0.0;
    std::vector<std::string> missing;
    size_t cursor = 0;
    for (int k = 0; k < 288; ++k) {
        const double expected = start + k * 300.0;
        bool found = false;
        while (cursor < log.samples.size()) {
            const double t = epoch_seconds(log.samples[cursor].when);
            if (t < expected - 1.0) {
                ++cursor;
                continue;
            }
            if (t <= expected + 1.0) {
                sum += log.samples[cursor].par * 300.0;
                ++cursor;
                found = true;
            }
            break;
        }
        if (!found) {
            if (missing.size() < 4)
                missing.push_back(format_instant(expected));
            else if (missing.size() == 4)
                missing.push_back("...");
        }
    }
    if (!missing.empty()) {
        std::string what = "sensor '" + log.sensor_id + "' has gaps in the 6am day window of " +
                           format_instant(start) + ", missing:";
        for (const auto& m : missing) what += " " + m;
        throw InputError(what);
    }
    return sum * 1e-6;
}

std::vector<double> hourly_aggregate(const SensorLog& log, const Date& day, int start_hour,
                                     int end_hour) {
    if (start_hour < 0 || end_hour > 24 || start_hour >= end_hour)
        throw InputError("bad aggregation window");
    std::vector<double> means;
    means.reserve(static_cast<size_t>(end_hour - start_hour));
    for (int h = start_hour; h < end_hour; ++h) {
        const double lo = epoch_seconds(DateTime{day, static_cast<double>(h)});
        const double hi = lo + 3600.0;
        double sum = 0.0;
        int count = 0;
        for (const auto& s : log.samples) {
            const double t = epoch_seconds(s.when);
            if (t >= lo - 0.5 && t < hi - 0.5) {
                sum += s.par;
                ++count;
            }
        }
        if (count != 12)
            throw InputError("sensor '" + log.sensor_id + "' hour " + std::to_string(h) +
                             ":00 has " + std::to_string(count) + " of 12 samples");
        means.push_back(sum / 12.0);
    }
    return means;
}

static std::vector<double> average_ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return v[i] < v[j]; });

    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

static double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

static bool is_constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InputError("series lengths differ");
    if (a.size() < 3) throw InputError("rank correlation needs at least 3 points");
    if (is_constant(a) || is_constant(b))
        throw ComputeError("rank correlation is undefined for a constant series");
    return std::clamp(pearson(average_ranks(a), average_ranks(b)), -1.0, 1.0);
}

ErrorStats mae_rmse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InputError("series lengths differ");
    if (a.empty()) throw InputError("series are empty");
    double abs_sum = 0.0, sq_sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        abs_sum += std::abs(d);
        sq_sum += d * d;
    }
    const double n = static_cast<double>(a.size());
    return ErrorStats{abs_sum / n, std::sqrt(sq_sum / n)};
}

double percent_reduction(double unshaded, double shaded) {
    if (unshaded <= 0.0) throw InputError("unshaded PAR must be positive");
    if (shaded < 0.0 || shaded > unshaded)
        throw InputError("shaded PAR must lie within [0, unshaded]");
    return 100.0 * (unshaded - shaded) / unshaded;
}

ValidationMetrics compare(const std::vector<double>& simulated,
                          const std::vector<double>& measured) {
    ValidationMetrics m;
    m.rho = spearman_rho(simulated, measured);
    const auto err = mae_rmse(simulated, measured);
    m.mae = err.mae;
    m.rmse = err.rmse;
    m.n = static_cast<int>(simulated.size());
    return m;
}

} // namespace parsol::val
