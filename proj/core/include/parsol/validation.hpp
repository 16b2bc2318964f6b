#pragma once

// Field-validation toolkit: sensor calibration, measured DLI from
// five-minute logs, hourly aggregation, and rank/error statistics for
// simulated-versus-measured comparison.

#include <string>
#include <vector>

#include "parsol/time.hpp"

namespace parsol::val {

struct CalibrationEquation {
    std::string sensor_id;
    double a = 1.0;         // slope
    double b = 0.0;         // intercept, umol m-2 s-1
    double r_squared = 1.0;
};

// y = a*raw + b, clamped at zero from below.
double calibrate(const CalibrationEquation& eq, double raw);

// The ten deployed quantum sensors.
std::vector<CalibrationEquation> default_calibrations();

// CSV rows: sensor_id,a,b,r_squared
std::vector<CalibrationEquation> load_calibrations(const std::string& path);

const CalibrationEquation& find_calibration(const std::vector<CalibrationEquation>& table,
                                            const std::string& sensor_id);

struct SensorLocation {
    std::string facade_id;
    int row = 0;
    int col = 0;
    std::string label; // e.g. "12a"
};

struct SensorSample {
    DateTime when;
    double par = 0.0; // umol m-2 s-1
};

struct SensorLog {
    std::string sensor_id;
    SensorLocation location;
    std::vector<SensorSample> samples; // strictly increasing, 5-minute spacing
};

// Checks ordering, 300 +/- 1 s spacing, and non-negative PAR.
void validate(const SensorLog& log);

// CSV rows: sensor_id,iso-timestamp,par; returns one log per sensor.
std::vector<SensorLog> load_sensor_logs(const std::string& path);

// DLI over the survey day starting 6am on `day` (288 five-minute samples).
// Incomplete days raise an error naming the missing intervals.
double measured_dli(const SensorLog& log, const Date& day);

// Mean PAR for each hour in [start_hour, end_hour) on `day`; every hour
// needs its full set of twelve samples.
std::vector<double> hourly_aggregate(const SensorLog& log, const Date& day, int start_hour = 7,
                                     int end_hour = 19);

// Spearman's rank correlation with average ranks for ties. Constant series
// have no defined rank correlation and raise an error.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

struct ErrorStats {
    double mae = 0.0;
    double rmse = 0.0;
};

ErrorStats mae_rmse(const std::vector<double>& a, const std::vector<double>& b);

double percent_reduction(double unshaded, double shaded);

struct ValidationMetrics {
    double rho = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    int n = 0;
};

ValidationMetrics compare(const std::vector<double>& simulated,
                          const std::vector<double>& measured);

} // namespace parsol::val
