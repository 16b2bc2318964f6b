#include "parsol/time.hpp"

#include <cstdio>

namespace parsol {

Date parse_date(const std::string& text) {
    int y = 0, mo = 0, d = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d", &y, &mo, &d) != 3)
        throw ParseError("expected YYYY-MM-DD, got '" + text + "'");
    Date date{y, mo, d};
    validate(date);
    return date;
}

DateTime parse_datetime(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    int n = std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &s);
    if (n < 3) throw ParseError("expected YYYY-MM-DD[THH:MM[:SS]], got '" + text + "'");
    Date date{y, mo, d};
    validate(date);
    if (n >= 4 && (h < 0 || h > 23)) throw ParseError("hour out of range in '" + text + "'");
    if (n >= 5 && (mi < 0 || mi > 59)) throw ParseError("minute out of range in '" + text + "'");
    if (n >= 6 && (s < 0 || s > 59)) throw ParseError("second out of range in '" + text + "'");
    double hour = h + mi / 60.0 + s / 3600.0;
    return DateTime{date, hour};
}

} // namespace parsol
