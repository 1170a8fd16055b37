#include "yardcast/time.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "yardcast/error.hpp"

namespace yardcast {

// Low-level civil <-> serial day conversions follow the classic shifted-era
// formulation (era = 400-year cycle) and are exact over the proleptic
// Gregorian calendar.
std::int64_t days_from_civil(const CivilDate& d) {
    std::int64_t y = d.year;
    const int m = d.month;
    const int day = d.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(day)};
}

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> lengths{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) throw InvalidArgument("month out of range: " + std::to_string(month));
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[static_cast<std::size_t>(month - 1)];
}

TimePoint timepoint_from_civil(const CivilTime& ct) {
    return days_from_civil(ct.date) * kSecsPerDay + ct.hour * 3600 + ct.minute * 60 + ct.second;
}

CivilTime civil_from_timepoint(TimePoint tp) {
    std::int64_t days = tp / kSecsPerDay;
    std::int64_t sod = tp % kSecsPerDay;
    if (sod < 0) {
        sod += kSecsPerDay;
        --days;
    }
    CivilTime ct;
    ct.date = civil_from_days(days);
    ct.hour = static_cast<int>(sod / 3600);
    ct.minute = static_cast<int>((sod % 3600) / 60);
    ct.second = static_cast<int>(sod % 60);
    return ct;
}

Weekday weekday_of(std::int64_t epoch_days) {
    // 1970-01-01 is a Thursday.
    std::int64_t w = (epoch_days + 3) % 7;
    if (w < 0) w += 7;
    return static_cast<Weekday>(w);
}

CivilDate add_months_clamped(const CivilDate& d, int months) {
    std::int64_t mono = static_cast<std::int64_t>(d.year) * 12 + (d.month - 1) + months;
    std::int64_t y = mono / 12;
    int m = static_cast<int>(mono % 12);
    if (m < 0) {
        m += 12;
        --y;
    }
    CivilDate out{static_cast<int>(y), m + 1, d.day};
    const int max_day = days_in_month(out.year, out.month);
    if (out.day > max_day) out.day = max_day;
    return out;
}

CivilDate parse_civil_date(const std::string& text) {
    int y = 0, m = 0, day = 0;
    char extra = '\0';
    if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &day, &extra) != 3)
        throw ParseError("bad date '" + text + "', expected YYYY-MM-DD");
    if (m < 1 || m > 12 || day < 1 || day > days_in_month(y, m))
        throw ParseError("date out of range: '" + text + "'");
    return CivilDate{y, m, day};
}

std::string format_civil_date(const CivilDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::string format_iso8601(TimePoint tp) {
    const CivilTime ct = civil_from_timepoint(tp);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", ct.date.year, ct.date.month,
                  ct.date.day, ct.hour, ct.minute, ct.second);
    return buf;
}

Weekday parse_weekday(const std::string& text) {
    std::string t;
    for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t.size() > 3) t.resize(3);
    if (t == "mon") return Weekday::Monday;
    if (t == "tue") return Weekday::Tuesday;
    if (t == "wed") return Weekday::Wednesday;
    if (t == "thu") return Weekday::Thursday;
    if (t == "fri") return Weekday::Friday;
    if (t == "sat") return Weekday::Saturday;
    if (t == "sun") return Weekday::Sunday;
    throw ParseError("unknown weekday '" + text + "'");
}

std::string weekday_name(Weekday d) {
    static constexpr std::array<const char*, 7> names{"mon", "tue", "wed", "thu",
                                                      "fri", "sat", "sun"};
    return names[static_cast<std::size_t>(d)];
}

}  // namespace yardcast
