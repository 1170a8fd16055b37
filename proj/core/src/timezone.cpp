#include "yardcast/timezone.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "yardcast/error.hpp"

namespace yardcast {

namespace {

std::uint32_t read_u32be(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
           std::uint32_t(p[3]);
}

std::int64_t read_i64be(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return static_cast<std::int64_t>(v);
}

std::int32_t read_i32be(const unsigned char* p) { return static_cast<std::int32_t>(read_u32be(p)); }

struct TzifHeader {
    std::uint32_t isutcnt, isstdcnt, leapcnt, timecnt, typecnt, charcnt;
};

// Byte size of one data block given the timestamp width.
std::size_t block_size(const TzifHeader& h, std::size_t ts_width) {
    return h.timecnt * ts_width + h.timecnt + h.typecnt * 6 + h.charcnt + h.leapcnt * (ts_width + 4) +
           h.isstdcnt + h.isutcnt;
}

bool valid_zone_id(const std::string& id) {
    if (id.empty() || id.front() == '/' || id.find("..") != std::string::npos) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '/' || c == '_' || c == '-' ||
               c == '+';
    });
}

// "+HH:MM", "-HH", "UTC+5", "UTC-08:00" -> offset seconds east of UTC.
bool parse_fixed_offset(const std::string& id, std::int32_t* out) {
    std::string s = id;
    if (s.rfind("UTC", 0) == 0 || s.rfind("utc", 0) == 0) s = s.substr(3);
    if (s.empty()) {
        *out = 0;
        return true;
    }
    if (s[0] != '+' && s[0] != '-') return false;
    const int sign = s[0] == '+' ? 1 : -1;
    int hh = 0, mm = 0;
    const char* p = s.c_str() + 1;
    if (std::sscanf(p, "%d:%d", &hh, &mm) < 1) return false;
    if (hh > 23 || mm > 59 || hh < 0 || mm < 0) return false;
    *out = sign * (hh * 3600 + mm * 60);
    return true;
}

}  // namespace

Timezone Timezone::utc() { return Timezone{}; }

Timezone Timezone::fixed(std::int32_t offset_seconds, std::string name) {
    Timezone tz;
    tz.name_ = std::move(name);
    tz.fixed_offset_ = offset_seconds;
    return tz;
}

Timezone Timezone::load(const std::string& id) {
    if (id.empty() || id == "UTC" || id == "utc" || id == "Z") return utc();
    std::int32_t off = 0;
    if (parse_fixed_offset(id, &off)) return fixed(off, id);
    if (!valid_zone_id(id)) throw ConfigError("invalid timezone id '" + id + "'");
    const char* tzdir = std::getenv("TZDIR");
    const std::string root = tzdir && *tzdir ? tzdir : "/usr/share/zoneinfo";
    return from_tzif(id, root + "/" + id);
}

Timezone Timezone::from_tzif(const std::string& id, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("unknown timezone '" + id + "' (no tz database entry at " + path + ")");
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    auto need = [&](std::size_t pos, std::size_t n) {
        if (pos + n > buf.size()) throw IoError("truncated tz database file: " + path);
    };

    need(0, 44);
    if (std::memcmp(buf.data(), "TZif", 4) != 0) throw IoError("not a TZif file: " + path);
    const char version = static_cast<char>(buf[4]);

    auto parse_header = [&](std::size_t pos) {
        need(pos, 44);
        TzifHeader h;
        h.isutcnt = read_u32be(&buf[pos + 20]);
        h.isstdcnt = read_u32be(&buf[pos + 24]);
        h.leapcnt = read_u32be(&buf[pos + 28]);
        h.timecnt = read_u32be(&buf[pos + 32]);
        h.typecnt = read_u32be(&buf[pos + 36]);
        h.charcnt = read_u32be(&buf[pos + 40]);
        return h;
    };

    TzifHeader h = parse_header(0);
    std::size_t pos = 44;
    std::size_t ts_width = 4;
    if (version >= '2') {
        // skip v1 block, use the 64-bit block
        pos = 44 + block_size(h, 4);
        h = parse_header(pos);
        pos += 44;
        ts_width = 8;
    }
    if (h.typecnt == 0) throw IoError("tz file has no local time types: " + path);
    need(pos, block_size(h, ts_width));

    std::vector<std::int64_t> trans_times(h.timecnt);
    for (std::uint32_t i = 0; i < h.timecnt; ++i) {
        const unsigned char* p = &buf[pos + i * ts_width];
        trans_times[i] = ts_width == 8 ? read_i64be(p) : read_i32be(p);
    }
    pos += h.timecnt * ts_width;
    std::vector<std::uint8_t> type_idx(h.timecnt);
    for (std::uint32_t i = 0; i < h.timecnt; ++i) type_idx[i] = buf[pos + i];
    pos += h.timecnt;

    struct TypeInfo {
        std::int32_t utoff;
        bool isdst;
    };
    std::vector<TypeInfo> types(h.typecnt);
    for (std::uint32_t i = 0; i < h.typecnt; ++i) {
        const unsigned char* p = &buf[pos + i * 6];
        types[i] = TypeInfo{read_i32be(p), p[4] != 0};
    }

    Timezone tz;
    tz.name_ = id;
    tz.has_transitions_ = true;
    // RFC 8536: before the first transition the first standard-time type applies.
    tz.initial_offset_ = types[0].utoff;
    for (const auto& t : types) {
        if (!t.isdst) {
            tz.initial_offset_ = t.utoff;
            break;
        }
    }
    tz.transitions_.reserve(h.timecnt);
    for (std::uint32_t i = 0; i < h.timecnt; ++i) {
        if (type_idx[i] >= types.size()) throw IoError("bad type index in tz file: " + path);
        tz.transitions_.push_back({trans_times[i], types[type_idx[i]].utoff});
    }
    return tz;
}

std::int32_t Timezone::offset_at_utc(TimePoint utc_seconds) const {
    if (!has_transitions_) return fixed_offset_;
    if (transitions_.empty() || utc_seconds < transitions_.front().at_utc) return initial_offset_;
    auto it = std::upper_bound(
        transitions_.begin(), transitions_.end(), utc_seconds,
        [](TimePoint t, const Transition& tr) { return t < tr.at_utc; });
    return std::prev(it)->offset_after;
}

TimePoint Timezone::local_to_utc(TimePoint local) const {
    if (!has_transitions_) return local - fixed_offset_;
    // Try the offset in force at the candidate instant; scanning both the
    // guess and its neighbours resolves ambiguous/skipped local times.
    std::int32_t prev = initial_offset_;
    TimePoint best = local - prev;
    bool found = false;
    auto consider = [&](std::int32_t off) {
        const TimePoint utc = local - off;
        if (offset_at_utc(utc) == off) {
            if (!found || utc < best) best = utc;
            found = true;
        }
    };
    consider(initial_offset_);
    for (const auto& tr : transitions_) {
        if (tr.at_utc > local + 2 * kSecsPerDay) break;
        if (tr.at_utc < local - 2 * kSecsPerDay) {
            prev = tr.offset_after;
            continue;
        }
        consider(tr.offset_after);
        prev = tr.offset_after;
    }
    consider(prev);
    if (found) return best;
    // Inside a spring-forward gap: use the post-gap offset.
    const std::int32_t post = offset_at_utc(local - prev);
    return local - post;
}

TimePoint parse_iso8601(const std::string& text, const Timezone& zoneless_tz) {
    std::string s = text;
    // trim
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.size() < 16) throw ParseError("bad timestamp '" + text + "'");

    bool zulu = false;
    std::int32_t zone_off = 0;
    bool has_zone = false;
    if (s.back() == 'Z' || s.back() == 'z') {
        zulu = true;
        s.pop_back();
    } else {
        // look for a +HH:MM / -HH:MM suffix after the time part
        const std::size_t tpos = 10;
        const std::size_t sign = s.find_first_of("+-", tpos);
        if (sign != std::string::npos) {
            std::int32_t off = 0;
            if (!parse_fixed_offset(s.substr(sign), &off))
                throw ParseError("bad zone suffix in '" + text + "'");
            zone_off = off;
            has_zone = true;
            s.resize(sign);
        }
    }

    CivilTime ct;
    int y = 0, mo = 0, d = 0, hh = 0, mi = 0, ss = 0;
    char sep = '\0';
    int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &hh, &mi, &ss);
    if (n < 6 || (sep != 'T' && sep != 't' && sep != ' '))
        throw ParseError("bad timestamp '" + text + "', expected YYYY-MM-DDTHH:MM[:SS]");
    if (n == 6) ss = 0;
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || hh > 23 || mi > 59 || ss > 59 ||
        hh < 0 || mi < 0 || ss < 0)
        throw ParseError("timestamp out of range: '" + text + "'");
    ct.date = CivilDate{y, mo, d};
    ct.hour = hh;
    ct.minute = mi;
    ct.second = ss;
    const TimePoint wall = timepoint_from_civil(ct);

    if (zulu) return wall;
    if (has_zone) return wall - zone_off;
    return zoneless_tz.local_to_utc(wall);
}

TimePoint parse_iso8601_utc(const std::string& text) {
    static const Timezone utc = Timezone::utc();
    return parse_iso8601(text, utc);
}

}  // namespace yardcast
