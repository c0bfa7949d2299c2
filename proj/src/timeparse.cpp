#include "stclust/timeparse.hpp"

#include <cstdio>

namespace stclust {

namespace {

// Proleptic Gregorian day count relative to 1970-01-01 (Howard Hinnant's
// civil-date algorithms).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = yr + (m <= 2);
}

bool two_digits(const std::string& s, std::size_t pos, int& out) {
    if (pos + 1 >= s.size() || s[pos] < '0' || s[pos] > '9' || s[pos + 1] < '0' ||
        s[pos + 1] > '9')
        return false;
    out = (s[pos] - '0') * 10 + (s[pos + 1] - '0');
    return true;
}

}  // namespace

std::optional<std::int64_t> parse_iso8601_utc(const std::string& s) {
    // Fixed layout through the seconds field: YYYY-MM-DDTHH:MM:SS
    if (s.size() < 19) return std::nullopt;
    int year = 0;
    for (int i = 0; i < 4; ++i) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
        year = year * 10 + (s[i] - '0');
    }
    int month, day, hour, minute, second;
    if (s[4] != '-' || !two_digits(s, 5, month) || s[7] != '-' || !two_digits(s, 8, day))
        return std::nullopt;
    if ((s[10] != 'T' && s[10] != ' ') || !two_digits(s, 11, hour) || s[13] != ':' ||
        !two_digits(s, 14, minute) || s[16] != ':' || !two_digits(s, 17, second))
        return std::nullopt;
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
        second > 60)
        return std::nullopt;
    // Round-trip the civil date to reject day numbers the month doesn't have.
    const std::int64_t day_count =
        days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    std::int64_t y_check;
    unsigned m_check, d_check;
    civil_from_days(day_count, y_check, m_check, d_check);
    if (y_check != year || m_check != static_cast<unsigned>(month) ||
        d_check != static_cast<unsigned>(day))
        return std::nullopt;

    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {  // fractional seconds: truncate
        ++pos;
        if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') return std::nullopt;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }
    const std::string tail = s.substr(pos);
    if (!tail.empty() && tail != "Z" && tail != "+00:00" && tail != "+0000" && tail != "-00:00")
        return std::nullopt;

    return day_count * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), mo, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace stclust
