#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "yardcast/series.hpp"
#include "yardcast/timezone.hpp"

namespace yardcast {

enum class CargoStatus { Empty, Full };

/// One container movement: yard entry, and exit when it has happened.
/// A missing gate_out means the box was still in the yard at dataset end.
struct GateEvent {
    std::string container_id;
    std::string shipping_line;
    std::string iso_code;  // 4-char ISO 6346 size/type code
    CargoStatus cargo_status = CargoStatus::Empty;
    TimePoint gate_in = 0;
    std::optional<TimePoint> gate_out;
};

struct EventLog {
    std::vector<GateEvent> events;
    TimePoint observation_end = 0;
};

/// Ordered first-match-wins rules over the 4-char code. Patterns use '?' as
/// a single-character wildcard ("??G?" matches any general-purpose code).
/// The final rule is always a catch-all mapping to Unknown.
class ClassificationTable {
public:
    struct Rule {
        std::string pattern;  // 4 chars, '?' wildcard
        ContainerCategory category;
    };

    ClassificationTable() = default;
    explicit ClassificationTable(std::vector<Rule> rules);

    /// Keyed on the ISO 6346 type-code letter (3rd character):
    /// G/V/B -> Standard, R/H -> Reefer, T/P/U/S -> Special, else Unknown.
    static ClassificationTable default_table();

    ContainerCategory classify(const std::string& iso_code) const;
    const std::vector<Rule>& rules() const { return rules_; }

private:
    std::vector<Rule> rules_;
};

ContainerCategory classify_container(const std::string& iso_code, const ClassificationTable& table);

/// Parses the gate-event CSV
/// (`container_id,shipping_line,iso_code,cargo_status,gate_in,gate_out`).
/// Zoneless timestamps are interpreted in `tz` and stored as UTC.
EventLog parse_event_log(std::istream& in, const Timezone& tz);
EventLog parse_event_log_file(const std::string& path, const Timezone& tz);

void write_event_log_csv(std::ostream& out, const EventLog& log);
void write_event_log_csv_file(const std::string& path, const EventLog& log);

/// Hourly presence counts: the value at hour h is the number of EMPTY
/// containers of `category` with gate_in <= h < gate_out (gate_out absent
/// counts through the final indexed hour).
StockSeries build_stock_series(const EventLog& log, ContainerCategory category,
                               const TimeIndex& index,
                               const ClassificationTable& table = ClassificationTable::default_table());

}  // namespace yardcast
