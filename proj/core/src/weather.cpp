#include "parsol/weather.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "parsol/error.hpp"

namespace parsol::weather {

const char* to_string(SkyCondition sky) {
    switch (sky) {
        case SkyCondition::Sunny: return "sunny";
        case SkyCondition::PartlyCloudy: return "partly-cloudy";
        case SkyCondition::Cloudy: return "cloudy";
    }
    return "?";
}

static std::string trim_lower(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out = s.substr(b, e - b);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

SkyCondition classify_skytype(const std::string& forecast) {
    const std::string f = trim_lower(forecast);
    if (f == "fair" || f == "fair & warm" || f == "fair and warm") return SkyCondition::Sunny;
    if (f == "partly cloudy") return SkyCondition::PartlyCloudy;
    if (f == "showers" || f == "thundery showers") return SkyCondition::Cloudy;
    throw InputError("unknown forecast category '" + forecast + "'");
}

static std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

static double parse_num(const std::string& s, const char* what, int line_no) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " value '" + s + "'", line_no);
    }
}

static int parse_int(const std::string& s, const char* what, int line_no) {
    const double v = parse_num(s, what, line_no);
    if (v != std::floor(v)) throw ParseError(std::string(what) + " is not an integer: " + s, line_no);
    return static_cast<int>(v);
}

const WeatherRecord* WeatherTable::find(int month, int day, int hour) const {
    auto it = index_.find((month * 100 + day) * 100 + hour);
    return it == index_.end() ? nullptr : &records[it->second];
}

void WeatherTable::rebuild_index() {
    index_.clear();
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const int key = (r.month * 100 + r.day) * 100 + r.hour;
        if (!index_.emplace(key, i).second)
            throw ParseError("duplicate weather record for " + std::to_string(r.month) + "/" +
                             std::to_string(r.day) + " hour " + std::to_string(r.hour));
    }
}

// EPW field positions (1-based within a data row).
namespace epw {
constexpr int kYear = 1, kMonth = 2, kDay = 3, kHour = 4;
constexpr int kDryBulb = 7;
constexpr int kGhi = 14, kDni = 15, kDhi = 16;
constexpr int kMinFields = 16;
constexpr double kMissingRadiation = 9999.0;
constexpr double kMissingDryBulb = 99.9;
} // namespace epw

WeatherTable parse_epw(std::istream& in, bool require_full_year) {
    WeatherTable table;
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw ParseError("empty EPW stream", 1);
    ++line_no;
    auto header = split_csv(line);
    if (header.empty() || trim_lower(header[0]) != "location")
        throw ParseError("EPW must start with a LOCATION line", 1);
    if (header.size() < 9) throw ParseError("LOCATION line too short", 1);
    table.location = header.size() > 1 ? header[1] : "";
    table.latitude = parse_num(header[6], "latitude", 1);
    table.longitude = parse_num(header[7], "longitude", 1);
    table.utc_offset = parse_num(header[8], "timezone", 1);

    for (int i = 0; i < 7; ++i) {
        if (!std::getline(in, line))
            throw ParseError("EPW header truncated; expected 8 header lines", line_no);
        ++line_no;
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) < epw::kMinFields)
            throw ParseError("expected at least " + std::to_string(epw::kMinFields) +
                                 " fields, got " + std::to_string(fields.size()),
                             line_no);
        WeatherRecord rec;
        rec.year = parse_int(fields[epw::kYear - 1], "year", line_no);
        rec.month = parse_int(fields[epw::kMonth - 1], "month", line_no);
        rec.day = parse_int(fields[epw::kDay - 1], "day", line_no);
        rec.hour = parse_int(fields[epw::kHour - 1], "hour", line_no);
        if (rec.month < 1 || rec.month > 12) throw ParseError("month out of range", line_no);
        if (rec.day < 1 || rec.day > days_in_month(rec.year, rec.month))
            throw ParseError("day out of range", line_no);
        if (rec.hour < 1 || rec.hour > 24) throw ParseError("hour out of range (1..24)", line_no);

        const double drybulb = parse_num(fields[epw::kDryBulb - 1], "dry bulb", line_no);
        if (drybulb < epw::kMissingDryBulb) rec.dry_bulb = drybulb;

        auto radiation = [&](int field, const char* what) -> std::optional<double> {
            const double v = parse_num(fields[field - 1], what, line_no);
            if (v >= epw::kMissingRadiation) return std::nullopt;
            if (v < 0.0) throw ParseError(std::string("negative ") + what, line_no);
            return v;
        };
        rec.ghi = radiation(epw::kGhi, "global horizontal radiation");
        rec.dni = radiation(epw::kDni, "direct normal radiation");
        rec.dhi = radiation(epw::kDhi, "diffuse horizontal radiation");
        table.records.push_back(rec);
    }

    if (require_full_year && table.records.size() != 8760 && table.records.size() != 8784)
        throw ParseError("expected 8760 or 8784 hourly records, got " +
                             std::to_string(table.records.size()),
                         line_no);
    table.rebuild_index();
    return table;
}

WeatherTable parse_epw_file(const std::string& path, bool require_full_year) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open EPW file '" + path + "'");
    return parse_epw(in, require_full_year);
}

std::string serialize_epw(const WeatherTable& table) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "LOCATION,%s,-,-,-,-,%.6f,%.6f,%.1f,0.0",
                  table.location.c_str(), table.latitude, table.longitude, table.utc_offset);
    out << buf << "\n";
    out << "DESIGN CONDITIONS,0\n";
    out << "TYPICAL/EXTREME PERIODS,0\n";
    out << "GROUND TEMPERATURES,0\n";
    out << "HOLIDAYS/DAYLIGHT SAVINGS,No,0,0,0\n";
    out << "COMMENTS 1,synthetic\n";
    out << "COMMENTS 2,\n";
    out << "DATA PERIODS,1,1,Data,Sunday, 1/ 1,12/31\n";

    auto num = [&](std::optional<double> v, double missing) {
        std::snprintf(buf, sizeof buf, "%.6g", v.value_or(missing));
        return std::string(buf);
    };
    for (const auto& r : table.records) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,60,-,", r.year, r.month, r.day, r.hour);
        out << buf;
        out << (r.dry_bulb ? num(r.dry_bulb, 0) : "99.9");
        // Fields 8..13: dew point, RH, pressure, extraterrestrial and IR
        // components; placeholders, nothing downstream reads them.
        out << ",0,0,101325,9999,9999,9999,";
        out << num(r.ghi, epw::kMissingRadiation) << ',' << num(r.dni, epw::kMissingRadiation)
            << ',' << num(r.dhi, epw::kMissingRadiation);
        out << ",999999,99,99,9999,99999,9,999999999,999,0.999,999,99,999,0,99\n";
    }
    return out.str();
}

IrradianceComponents clear_sky_components(const solar::SunVector& sun, double turbidity) {
    IrradianceComponents c;
    if (sun.elevation <= 0.0) return c;
    const double sin_e = std::sin(deg2rad(sun.elevation));
    const double airmass =
        1.0 / (sin_e + 0.50572 * std::pow(sun.elevation + 6.07995, -1.6364));
    c.dni = 1361.0 * std::pow(0.7, std::pow(airmass, 0.678)) *
            std::exp(-0.02 * (turbidity - 2.75));
    c.dhi = 0.10 * 1361.0 * sin_e;
    c.ghi = c.dni * sin_e + c.dhi;
    return c;
}

IrradianceComponents skytype_adjust(const IrradianceComponents& c, SkyCondition sky,
                                    const SkytypeMultipliers& m) {
    double f_dni = 1.0, f_dhi = 1.0;
    switch (sky) {
        case SkyCondition::Sunny:
            f_dni = m.sunny_dni;
            f_dhi = m.sunny_dhi;
            break;
        case SkyCondition::PartlyCloudy:
            f_dni = m.partly_cloudy_dni;
            f_dhi = m.partly_cloudy_dhi;
            break;
        case SkyCondition::Cloudy:
            f_dni = m.cloudy_dni;
            f_dhi = m.cloudy_dhi;
            break;
    }
    IrradianceComponents out;
    out.dni = f_dni * c.dni;
    out.dhi = f_dhi * c.dhi;
    // ghi - dhi recovers the horizontal beam part without needing the sun.
    out.ghi = f_dni * std::max(0.0, c.ghi - c.dhi) + f_dhi * c.dhi;
    return out;
}

DaySegment segment_for_hour(double hour) {
    if (hour >= 6.0 && hour < 12.0) return DaySegment::Morning;
    if (hour >= 12.0 && hour < 18.0) return DaySegment::Afternoon;
    return DaySegment::Night;
}

void SkySchedule::add(const Date& date, DaySegment seg, SkyCondition sky) {
    entries[{static_cast<int>(day_serial(date)), static_cast<int>(seg)}] = sky;
}

SkyCondition SkySchedule::lookup(const DateTime& instant) const {
    const DaySegment seg = segment_for_hour(instant.hour);
    // The survey day runs 6am to 6am: small hours belong to yesterday's night.
    const Date date = instant.hour < 6.0 ? prev_day(instant.date) : instant.date;
    auto it = entries.find({static_cast<int>(day_serial(date)), static_cast<int>(seg)});
    if (it == entries.end())
        throw InputError("sky schedule has no entry for " + std::to_string(date.year) + "-" +
                         std::to_string(date.month) + "-" + std::to_string(date.day));
    return it->second;
}

static DaySegment parse_segment(const std::string& s, int line_no) {
    const std::string t = trim_lower(s);
    if (t == "morning") return DaySegment::Morning;
    if (t == "afternoon") return DaySegment::Afternoon;
    if (t == "night") return DaySegment::Night;
    throw ParseError("unknown day segment '" + s + "'", line_no);
}

SkySchedule load_sky_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sky schedule '" + path + "'");
    SkySchedule schedule;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        auto fields = split_csv(line);
        if (fields.size() != 3) throw ParseError("expected date,segment,category", line_no);
        if (trim_lower(fields[0]) == "date") continue; // header row
        Date date;
        try {
            date = parse_date(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        schedule.add(date, parse_segment(fields[1], line_no), classify_skytype(fields[2]));
    }
    return schedule;
}

} // namespace parsol::weather
