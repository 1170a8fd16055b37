#include "yardcast/series.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "yardcast/error.hpp"
#include "yardcast/timezone.hpp"

namespace yardcast {

std::string to_string(ContainerCategory c) {
    switch (c) {
        case ContainerCategory::Standard: return "standard";
        case ContainerCategory::Special: return "special";
        case ContainerCategory::Reefer: return "reefer";
        case ContainerCategory::Unknown: return "unknown";
    }
    throw InvalidArgument("bad category value");
}

ContainerCategory category_from_string(const std::string& s) {
    if (s == "standard") return ContainerCategory::Standard;
    if (s == "special") return ContainerCategory::Special;
    if (s == "reefer") return ContainerCategory::Reefer;
    if (s == "unknown") return ContainerCategory::Unknown;
    throw ParseError("unknown container category '" + s + "'");
}

TimeIndex::TimeIndex(TimePoint start, std::size_t length) : start_(start), length_(length) {
    if (!is_hour_aligned(start)) throw InvalidArgument("index start is not hour-aligned");
    if (length == 0) throw InvalidArgument("index length must be >= 1");
}

std::size_t TimeIndex::position_of(TimePoint tp) const {
    if (!contains(tp))
        throw InvalidArgument("timestamp " + format_iso8601(tp) + " is not in the index");
    return static_cast<std::size_t>((tp - start_) / kSecsPerHour);
}

TimeIndex make_hourly_index(TimePoint start, TimePoint end) {
    const TimePoint s = floor_to_hour(start);
    const TimePoint e = floor_to_hour(end);
    if (s >= e)
        throw InvalidArgument("invalid range: start " + format_iso8601(s) + " must precede end " +
                              format_iso8601(e));
    return TimeIndex(s, static_cast<std::size_t>((e - s) / kSecsPerHour));
}

void CalendarSpec::add_holiday(const std::string& group_name, const CivilDate& date) {
    const std::int64_t day = days_from_civil(date);
    holidays.insert(day);
    for (auto& g : holiday_groups) {
        if (g.name == group_name) {
            if (std::find(g.dates.begin(), g.dates.end(), day) == g.dates.end())
                g.dates.push_back(day);
            return;
        }
    }
    holiday_groups.push_back({group_name, {day}});
}

bool CalendarSpec::is_business_day(std::int64_t epoch_day) const {
    if (weekend_days.count(weekday_of(epoch_day)) > 0) return false;
    return holidays.count(epoch_day) == 0;
}

StockSeries::StockSeries(TimeIndex index, std::vector<std::int64_t> values,
                         ContainerCategory category)
    : index_(index), values_(std::move(values)), category_(category) {
    if (values_.size() != index_.size())
        throw ValidationError("series values length " + std::to_string(values_.size()) +
                              " != index length " + std::to_string(index_.size()));
    for (const auto v : values_)
        if (v < 0) throw ValidationError("negative stock count " + std::to_string(v));
}

StockSeries StockSeries::slice_positions(std::size_t from, std::size_t to) const {
    if (from > to || to >= size()) throw InvalidArgument("bad slice positions");
    return StockSeries(TimeIndex(index_.at(from), to - from + 1),
                       std::vector<std::int64_t>(values_.begin() + static_cast<std::ptrdiff_t>(from),
                                                 values_.begin() + static_cast<std::ptrdiff_t>(to) + 1),
                       category_);
}

StockSeries StockSeries::slice(TimePoint from_ts, TimePoint to_ts) const {
    return slice_positions(index_.position_of(from_ts), index_.position_of(to_ts));
}

std::vector<bool> business_day_mask(const TimeIndex& index, const CalendarSpec& cal) {
    std::vector<bool> mask(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) mask[i] = cal.is_business_hour(index.at(i));
    return mask;
}

std::pair<StockSeries, StockSeries> split_at(const StockSeries& series, TimePoint cut) {
    const TimePoint c = floor_to_hour(cut);
    const auto& idx = series.index();
    if (!idx.contains(c) || c == idx.last())
        throw InvalidArgument("invalid cut " + format_iso8601(cut) +
                              ": must be an index timestamp strictly before the last one");
    const std::size_t pos = idx.position_of(c);
    return {series.slice_positions(0, pos), series.slice_positions(pos + 1, series.size() - 1)};
}

void write_series_csv(std::ostream& out, const StockSeries& series) {
    out << "timestamp,category,count\n";
    const std::string cat = to_string(series.category());
    for (std::size_t i = 0; i < series.size(); ++i)
        out << format_iso8601(series.index().at(i)) << ',' << cat << ',' << series.values()[i]
            << '\n';
}

void write_series_csv_file(const std::string& path, const StockSeries& series) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_series_csv(out, series);
}

StockSeries read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty series CSV");
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,category,count")
        throw ParseError("bad series CSV header: '" + line + "'");

    std::vector<TimePoint> stamps;
    std::vector<std::int64_t> values;
    std::string category;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string ts, cat, cnt;
        if (!std::getline(row, ts, ',') || !std::getline(row, cat, ',') || !std::getline(row, cnt))
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 columns");
        try {
            stamps.push_back(parse_iso8601_utc(ts));
            values.push_back(std::stoll(cnt));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(line_no) + ": bad count '" + cnt + "'");
        }
        if (category.empty())
            category = cat;
        else if (category != cat)
            throw ParseError("line " + std::to_string(line_no) + ": mixed categories in one file");
    }
    if (stamps.empty()) throw ParseError("series CSV has no data rows");
    for (std::size_t i = 1; i < stamps.size(); ++i)
        if (stamps[i] - stamps[i - 1] != kSecsPerHour)
            throw ParseError("series timestamps are not contiguous hourly at row " +
                             std::to_string(i + 2));
    return StockSeries(TimeIndex(stamps.front(), stamps.size()), std::move(values),
                       category_from_string(category));
}

StockSeries read_series_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open series CSV '" + path + "'");
    return read_series_csv(in);
}

}  // namespace yardcast
