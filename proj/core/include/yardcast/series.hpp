#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "yardcast/category.hpp"
#include "yardcast/time.hpp"

namespace yardcast {

/// Contiguous hourly grid: timestamps start, start+1h, ..., strictly
/// increasing with a fixed one-hour step.
class TimeIndex {
public:
    TimeIndex(TimePoint start, std::size_t length);

    TimePoint start() const { return start_; }
    std::size_t size() const { return length_; }
    TimePoint at(std::size_t i) const { return start_ + static_cast<TimePoint>(i) * kSecsPerHour; }
    TimePoint last() const { return at(length_ - 1); }

    bool contains(TimePoint tp) const {
        return is_hour_aligned(tp) && tp >= start_ && tp <= last();
    }
    /// Position of an aligned timestamp inside the index; throws if outside.
    std::size_t position_of(TimePoint tp) const;

    friend bool operator==(const TimeIndex&, const TimeIndex&) = default;

private:
    TimePoint start_;
    std::size_t length_;
};

/// Index covering [start, end), one entry per hour. Inputs are truncated to
/// hour boundaries first.
TimeIndex make_hourly_index(TimePoint start, TimePoint end);

/// Weekend days plus explicit holiday dates; business hours are everything
/// else. Holidays may be grouped under names for the holiday-effect model.
struct CalendarSpec {
    std::set<Weekday> weekend_days{Weekday::Saturday, Weekday::Sunday};
    std::set<std::int64_t> holidays;  // epoch days

    struct HolidayGroup {
        std::string name;
        std::vector<std::int64_t> dates;  // epoch days, unique within group
    };
    std::vector<HolidayGroup> holiday_groups;

    void add_holiday(const std::string& group_name, const CivilDate& date);
    bool is_business_day(std::int64_t epoch_day) const;
    bool is_business_hour(TimePoint tp) const {
        std::int64_t d = tp / kSecsPerDay;
        if (tp % kSecsPerDay < 0) --d;
        return is_business_day(d);
    }
};

/// Hourly empty-container counts for one category. Immutable after
/// construction; values.size() always equals index.size().
class StockSeries {
public:
    StockSeries(TimeIndex index, std::vector<std::int64_t> values, ContainerCategory category);

    const TimeIndex& index() const { return index_; }
    const std::vector<std::int64_t>& values() const { return values_; }
    ContainerCategory category() const { return category_; }
    std::size_t size() const { return values_.size(); }

    std::vector<double> values_as_double() const {
        return std::vector<double>(values_.begin(), values_.end());
    }
    /// Sub-series covering the index positions [from, to] inclusive.
    StockSeries slice_positions(std::size_t from, std::size_t to) const;
    /// Sub-series covering timestamps in [from_ts, to_ts] inclusive.
    StockSeries slice(TimePoint from_ts, TimePoint to_ts) const;

private:
    TimeIndex index_;
    std::vector<std::int64_t> values_;
    ContainerCategory category_;
};

/// True for hours whose calendar date is neither a weekend day nor a holiday.
std::vector<bool> business_day_mask(const TimeIndex& index, const CalendarSpec& cal);

/// Partitions at `cut`: train covers [start, cut], test covers (cut, end].
/// `cut` must be an index timestamp strictly before the last one.
std::pair<StockSeries, StockSeries> split_at(const StockSeries& series, TimePoint cut);

/// CSV with header "timestamp,category,count"; ISO-8601 Z timestamps.
void write_series_csv(std::ostream& out, const StockSeries& series);
void write_series_csv_file(const std::string& path, const StockSeries& series);
StockSeries read_series_csv(std::istream& in);
StockSeries read_series_csv_file(const std::string& path);

}  // namespace yardcast
