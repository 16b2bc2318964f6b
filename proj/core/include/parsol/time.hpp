#pragma once

// Calendar helpers. Dates are proleptic Gregorian; times are local civil
// hours as doubles (13.5 = 13:30). No time zone database, callers carry a
// fixed UTC offset explicitly.

#include <chrono>
#include <string>

#include "parsol/error.hpp"

namespace parsol {

inline bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

inline int days_in_month(int year, int month) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) throw InputError("month out of range: " + std::to_string(month));
    if (month == 2 && is_leap_year(year)) return 29;
    return kDays[month - 1];
}

struct Date {
    int year = 2020;
    int month = 1;
    int day = 1;

    bool operator==(const Date&) const = default;
};

inline void validate(const Date& d) {
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw InputError("invalid date " + std::to_string(d.year) + "-" + std::to_string(d.month) +
                         "-" + std::to_string(d.day));
}

// 1-based ordinal day (Jan 1 = 1, Dec 31 = 365 or 366).
inline int day_of_year(const Date& d) {
    validate(d);
    static constexpr int kCum[12] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
    int n = kCum[d.month - 1] + d.day;
    if (d.month > 2 && is_leap_year(d.year)) ++n;
    return n;
}

inline Date next_day(Date d) {
    validate(d);
    if (++d.day > days_in_month(d.year, d.month)) {
        d.day = 1;
        if (++d.month > 12) {
            d.month = 1;
            ++d.year;
        }
    }
    return d;
}

inline Date prev_day(Date d) {
    validate(d);
    if (--d.day < 1) {
        if (--d.month < 1) {
            d.month = 12;
            --d.year;
        }
        d.day = days_in_month(d.year, d.month);
    }
    return d;
}

// Days since 1970-01-01; gives timestamps a single linear axis.
inline long long day_serial(const Date& d) {
    validate(d);
    return std::chrono::sys_days(std::chrono::year(d.year) / d.month / d.day)
        .time_since_epoch()
        .count();
}

struct DateTime {
    Date date;
    double hour = 0.0; // local civil time, [0, 24)
};

inline double epoch_seconds(const DateTime& t) {
    return static_cast<double>(day_serial(t.date)) * 86400.0 + t.hour * 3600.0;
}

// Parses "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM" or "YYYY-MM-DDTHH:MM:SS".
DateTime parse_datetime(const std::string& text);
Date parse_date(const std::string& text);

} // namespace parsol
