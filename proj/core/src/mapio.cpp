#include "parsol/mapio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "parsol/error.hpp"
#include "parsol/version.hpp"

namespace parsol::mapio {

std::string hash_config(const std::string& canonical_config) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_config) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_timestamp(const DateTime& t) {
    int minutes = static_cast<int>(std::lround(t.hour * 60.0));
    int day_carry = 0;
    if (minutes >= 24 * 60) {
        minutes -= 24 * 60;
        day_carry = 1;
    }
    Date d = t.date;
    if (day_carry) d = next_day(d);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", d.year, d.month, d.day,
                  minutes / 60, minutes % 60);
    return buf;
}

static std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    return out;
}

static void write_header(std::ofstream& out, const OutputMeta& meta) {
    out << "# parsol " << kVersion << " seed=" << meta.seed << " config="
        << (meta.config_hash.empty() ? "-" : meta.config_hash) << "\n";
}

static std::string fmt(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

void write_map_csv(const std::string& path, const city::FacadeGrid& grid,
                   const std::vector<double>& values, const OutputMeta& meta,
                   const std::string& value_name, int precision) {
    if (values.size() != grid.cells.size())
        throw InputError("map size does not match grid");
    auto out = open_out(path);
    write_header(out, meta);
    out << "row,col," << value_name << "\n";
    for (size_t i = 0; i < values.size(); ++i) {
        const auto& cell = grid.cells[i];
        out << cell.row << ',' << cell.col << ',' << fmt(values[i], precision) << "\n";
    }
}

void write_dli_csv(const std::string& path, const rad::DliMap& map, const OutputMeta& meta) {
    auto out = open_out(path);
    write_header(out, meta);
    out << "row,col,dli,rounded\n";
    for (size_t i = 0; i < map.values.size(); ++i) {
        const auto& cell = map.grid.cells[i];
        out << cell.row << ',' << cell.col << ',' << fmt(map.values[i], 6) << ','
            << map.rounded[i] << "\n";
    }
}

void write_shadow_csv(const std::string& path, const rad::ShadowMap& map,
                      const OutputMeta& meta) {
    auto out = open_out(path);
    write_header(out, meta);
    out << "row,col,percent_sunlit\n";
    for (size_t i = 0; i < map.values.size(); ++i) {
        const auto& cell = map.grid.cells[i];
        out << cell.row << ',' << cell.col << ',' << fmt(100.0 * map.values[i], 2) << "\n";
    }
}

void write_suitability_csv(const std::string& path, const agro::SuitabilityMap& map,
                           const OutputMeta& meta) {
    auto out = open_out(path);
    write_header(out, meta);
    out << "row,col,dli,suitable\n";
    for (size_t i = 0; i < map.mask.size(); ++i) {
        const auto& cell = map.grid.cells[i];
        out << cell.row << ',' << cell.col << ',' << fmt(map.dli[i], 6) << ','
            << (map.mask[i] ? 1 : 0) << "\n";
    }
}

void write_series_csv(const std::string& path, const std::vector<SeriesPoint>& points,
                      const OutputMeta& meta, const std::string& value_name, int precision) {
    auto out = open_out(path);
    write_header(out, meta);
    out << "label,timestamp," << value_name << "\n";
    for (const auto& p : points)
        out << p.label << ',' << format_timestamp(p.when) << ',' << fmt(p.value, precision)
            << "\n";
}

void write_ppm(const std::string& path, int rows, int cols, const std::vector<double>& values,
               double vmax) {
    if (values.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
        throw InputError("image size does not match grid");
    if (vmax <= 0.0) {
        vmax = *std::max_element(values.begin(), values.end());
        if (vmax <= 0.0) vmax = 1.0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << "P6\n" << cols << ' ' << rows << "\n255\n";
    // Grid row 1 is the bottom of the facade, so it lands on the last image row.
    for (int r = rows; r >= 1; --r) {
        for (int c = 1; c <= cols; ++c) {
            const double v = values[static_cast<size_t>(r - 1) * cols + (c - 1)];
            const double t = std::clamp(v / vmax, 0.0, 1.0);
            const unsigned char g = static_cast<unsigned char>(std::lround(255.0 * t));
            const unsigned char px[3] = {g, g, g};
            out.write(reinterpret_cast<const char*>(px), 3);
        }
    }
}

namespace {

struct CsvRow {
    std::vector<std::string> fields;
    int line_no = 0;
};

std::vector<CsvRow> read_csv_rows(const std::string& path, size_t min_fields,
                                  const char* expected_header) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::vector<CsvRow> rows;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        CsvRow row;
        row.line_no = line_no;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                row.fields.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur.push_back(c);
            }
        }
        row.fields.push_back(cur);
        if (!saw_header && !row.fields.empty() && row.fields[0] == expected_header) {
            saw_header = true;
            continue;
        }
        if (row.fields.size() < min_fields)
            throw ParseError("'" + path + "': expected at least " + std::to_string(min_fields) +
                                 " fields",
                             line_no);
        rows.push_back(std::move(row));
    }
    return rows;
}

double to_num(const std::string& s, const std::string& path, int line_no) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw ParseError("'" + path + "': bad number '" + s + "'", line_no);
    }
}

} // namespace

rad::DliMap read_dli_csv(const std::string& path) {
    const auto rows = read_csv_rows(path, 4, "row");
    if (rows.empty()) throw InputError("'" + path + "' holds no map cells");

    int max_row = 0, max_col = 0;
    for (const auto& r : rows) {
        max_row = std::max(max_row, static_cast<int>(to_num(r.fields[0], path, r.line_no)));
        max_col = std::max(max_col, static_cast<int>(to_num(r.fields[1], path, r.line_no)));
    }

    // A placeholder facade carries the indices; geometry is not recoverable
    // from a map file and nothing downstream of a reread needs it.
    city::Facade facade;
    facade.origin = Vec3{0, 0, 0};
    facade.u = Vec3{1, 0, 0};
    facade.v = Vec3{0, 0, 1};
    facade.normal = Vec3{0, -1, 0};
    facade.width = max_col;
    facade.height = max_row;
    facade.azimuth = 180.0;

    rad::DliMap map;
    map.grid = city::grid_facade(facade, max_row, max_col, 0.01);
    map.period_label = "from-file";
    map.values.assign(map.grid.cells.size(), 0.0);
    map.rounded.assign(map.grid.cells.size(), 0);
    std::vector<bool> seen(map.grid.cells.size(), false);
    for (const auto& r : rows) {
        const int row = static_cast<int>(to_num(r.fields[0], path, r.line_no));
        const int col = static_cast<int>(to_num(r.fields[1], path, r.line_no));
        if (row < 1 || col < 1) throw ParseError("'" + path + "': cell index < 1", r.line_no);
        const size_t i =
            static_cast<size_t>(row - 1) * static_cast<size_t>(max_col) + (col - 1);
        map.values[i] = to_num(r.fields[2], path, r.line_no);
        map.rounded[i] = static_cast<int>(to_num(r.fields[3], path, r.line_no));
        seen[i] = true;
    }
    for (size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw InputError("'" + path + "' is missing cells; not a full row x col map");
    return map;
}

std::vector<SeriesPoint> read_series_csv(const std::string& path) {
    const auto rows = read_csv_rows(path, 3, "label");
    std::vector<SeriesPoint> points;
    points.reserve(rows.size());
    for (const auto& r : rows) {
        SeriesPoint p;
        p.label = r.fields[0];
        try {
            p.when = parse_datetime(r.fields[1]);
        } catch (const ParseError& e) {
            throw ParseError("'" + path + "': " + e.what(), r.line_no);
        }
        p.value = to_num(r.fields[2], path, r.line_no);
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace parsol::mapio
