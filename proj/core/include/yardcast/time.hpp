#pragma once

#include <cstdint>
#include <string>

namespace yardcast {

/// Seconds since the Unix epoch, always UTC. Hourly series work on values
/// aligned to exact hour boundaries.
using TimePoint = std::int64_t;

inline constexpr std::int64_t kSecsPerHour = 3600;
inline constexpr std::int64_t kSecsPerDay = 86400;
inline constexpr std::int64_t kHoursPerDay = 24;
inline constexpr std::int64_t kHoursPerWeek = 168;
/// Mean tropical year in hours (365.25 days), the yearly seasonal period.
inline constexpr double kHoursPerYear = 8766.0;

struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    friend bool operator==(const CivilDate&, const CivilDate&) = default;
    friend auto operator<=>(const CivilDate&, const CivilDate&) = default;
};

struct CivilTime {
    CivilDate date;
    int hour = 0;
    int minute = 0;
    int second = 0;
};

enum class Weekday : int { Monday = 0, Tuesday, Wednesday, Thursday, Friday, Saturday, Sunday };

/// Days since 1970-01-01 for a proleptic Gregorian date (negative before it).
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

bool is_leap_year(int year);
int days_in_month(int year, int month);

TimePoint timepoint_from_civil(const CivilTime& ct);
CivilTime civil_from_timepoint(TimePoint tp);

Weekday weekday_of(std::int64_t epoch_days);
inline Weekday weekday_of_timepoint(TimePoint tp) {
    // floor division keeps pre-epoch times correct
    std::int64_t days = tp / kSecsPerDay;
    if (tp % kSecsPerDay < 0) --days;
    return weekday_of(days);
}

inline TimePoint floor_to_hour(TimePoint tp) {
    TimePoint r = tp % kSecsPerHour;
    if (r < 0) r += kSecsPerHour;
    return tp - r;
}
inline bool is_hour_aligned(TimePoint tp) { return tp % kSecsPerHour == 0; }

/// Shifts a civil date back/forward by whole months, clamping the
/// day-of-month to the target month's length (Mar-31 minus 1 month -> Feb-28/29).
CivilDate add_months_clamped(const CivilDate& d, int months);

/// Parses "YYYY-MM-DD".
CivilDate parse_civil_date(const std::string& text);
std::string format_civil_date(const CivilDate& d);

/// Formats as ISO-8601 UTC, e.g. "2022-01-01T05:00:00Z".
std::string format_iso8601(TimePoint tp);

/// Weekday name in config files: "mon".."sun" (long names accepted too).
Weekday parse_weekday(const std::string& text);
std::string weekday_name(Weekday d);

}  // namespace yardcast
