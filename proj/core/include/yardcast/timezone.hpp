#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "yardcast/time.hpp"

namespace yardcast {

/// Converts terminal-local wall-clock times to UTC. Supports fixed offsets
/// ("UTC", "+05:30", "UTC-8") and IANA ids ("America/Los_Angeles") read from
/// the system tz database (TZDIR overrides /usr/share/zoneinfo).
///
/// DST edge conventions for local -> UTC: an ambiguous local time (clocks
/// fell back) resolves to the earlier instant; a non-existent local time
/// (clocks sprang forward) is interpreted with the post-transition offset.
class Timezone {
public:
    static Timezone utc();
    static Timezone fixed(std::int32_t offset_seconds, std::string name);
    /// Parses a zone id; loads a TZif file for IANA names.
    static Timezone load(const std::string& id);

    TimePoint local_to_utc(TimePoint local_wall_seconds) const;
    std::int32_t offset_at_utc(TimePoint utc_seconds) const;
    const std::string& name() const { return name_; }

private:
    struct Transition {
        std::int64_t at_utc;
        std::int32_t offset_after;
    };

    std::string name_ = "UTC";
    std::int32_t fixed_offset_ = 0;
    bool has_transitions_ = false;
    std::int32_t initial_offset_ = 0;
    std::vector<Transition> transitions_;

    static Timezone from_tzif(const std::string& id, const std::string& path);
};

/// Parses an ISO-8601 timestamp. Accepts "YYYY-MM-DDTHH:MM[:SS]" with an
/// optional "Z" or "+HH:MM"/"-HH:MM" suffix and a space instead of 'T'.
/// Zoneless values are interpreted in `zoneless_tz`.
TimePoint parse_iso8601(const std::string& text, const Timezone& zoneless_tz);

/// Zoneless values are treated as UTC.
TimePoint parse_iso8601_utc(const std::string& text);

}  // namespace yardcast
