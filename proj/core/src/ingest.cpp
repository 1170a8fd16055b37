#include "yardcast/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "yardcast/error.hpp"

namespace yardcast {

ClassificationTable::ClassificationTable(std::vector<Rule> rules) : rules_(std::move(rules)) {
    for (const auto& r : rules_)
        if (r.pattern.size() != 4)
            throw ConfigError("classification pattern '" + r.pattern + "' must have 4 characters");
    if (rules_.empty() || rules_.back().pattern != "????" ||
        rules_.back().category != ContainerCategory::Unknown)
        rules_.push_back({"????", ContainerCategory::Unknown});
}

ClassificationTable ClassificationTable::default_table() {
    return ClassificationTable({
        {"??G?", ContainerCategory::Standard},
        {"??V?", ContainerCategory::Standard},
        {"??B?", ContainerCategory::Standard},
        {"??R?", ContainerCategory::Reefer},
        {"??H?", ContainerCategory::Reefer},
        {"??T?", ContainerCategory::Special},
        {"??P?", ContainerCategory::Special},
        {"??U?", ContainerCategory::Special},
        {"??S?", ContainerCategory::Special},
    });
}

ContainerCategory ClassificationTable::classify(const std::string& iso_code) const {
    if (iso_code.size() != 4)
        throw ValidationError("ISO code '" + iso_code + "' must have 4 characters");
    for (const auto& r : rules_) {
        bool match = true;
        for (std::size_t i = 0; i < 4 && match; ++i)
            match = r.pattern[i] == '?' || r.pattern[i] == iso_code[i];
        if (match) return r.category;
    }
    return ContainerCategory::Unknown;  // unreachable: constructor appends the catch-all
}

ContainerCategory classify_container(const std::string& iso_code,
                                     const ClassificationTable& table) {
    return table.classify(iso_code);
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

EventLog parse_event_log(std::istream& in, const Timezone& tz) {
    static const std::string expected_header =
        "container_id,shipping_line,iso_code,cargo_status,gate_in,gate_out";
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty event log");
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw ParseError("bad event log header: expected '" + expected_header + "', got '" + line +
                         "'");

    EventLog log;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_row(line);
        if (cells.size() != 6)
            throw ParseError("line " + std::to_string(line_no) + ": expected 6 columns, got " +
                             std::to_string(cells.size()));
        GateEvent ev;
        ev.container_id = cells[0];
        ev.shipping_line = cells[1];
        ev.iso_code = cells[2];
        if (ev.iso_code.size() != 4)
            throw ParseError("line " + std::to_string(line_no) + ": ISO code '" + ev.iso_code +
                             "' must have 4 characters");
        if (cells[3] == "EMPTY")
            ev.cargo_status = CargoStatus::Empty;
        else if (cells[3] == "FULL")
            ev.cargo_status = CargoStatus::Full;
        else
            throw ParseError("line " + std::to_string(line_no) + ": cargo_status must be EMPTY or FULL");
        try {
            ev.gate_in = parse_iso8601(cells[4], tz);
            if (!cells[5].empty()) ev.gate_out = parse_iso8601(cells[5], tz);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (ev.gate_out && *ev.gate_out < ev.gate_in)
            throw ValidationError("line " + std::to_string(line_no) + ": gate_out " +
                                  format_iso8601(*ev.gate_out) + " precedes gate_in " +
                                  format_iso8601(ev.gate_in));
        log.events.push_back(std::move(ev));
        log.observation_end = std::max(log.observation_end, log.events.back().gate_in);
        if (log.events.back().gate_out)
            log.observation_end = std::max(log.observation_end, *log.events.back().gate_out);
    }
    return log;
}

EventLog parse_event_log_file(const std::string& path, const Timezone& tz) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open event log '" + path + "'");
    return parse_event_log(in, tz);
}

void write_event_log_csv(std::ostream& out, const EventLog& log) {
    out << "container_id,shipping_line,iso_code,cargo_status,gate_in,gate_out\n";
    for (const auto& ev : log.events) {
        out << ev.container_id << ',' << ev.shipping_line << ',' << ev.iso_code << ','
            << (ev.cargo_status == CargoStatus::Empty ? "EMPTY" : "FULL") << ','
            << format_iso8601(ev.gate_in) << ',';
        if (ev.gate_out) out << format_iso8601(*ev.gate_out);
        out << '\n';
    }
}

void write_event_log_csv_file(const std::string& path, const EventLog& log) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_event_log_csv(out, log);
}

StockSeries build_stock_series(const EventLog& log, ContainerCategory category,
                               const TimeIndex& index, const ClassificationTable& table) {
    // Difference array over hour slots, prefix-summed at the end. A container
    // contributes to snapshot h iff gate_in <= h < gate_out.
    std::vector<std::int64_t> delta(index.size() + 1, 0);
    const TimePoint start = index.start();
    const std::int64_t n = static_cast<std::int64_t>(index.size());

    auto first_slot_at_or_after = [&](TimePoint tp) {
        // smallest i with index.at(i) >= tp
        const std::int64_t diff = tp - start;
        std::int64_t i = diff / kSecsPerHour;
        if (diff % kSecsPerHour > 0) ++i;
        if (diff % kSecsPerHour < 0) i = (diff - (kSecsPerHour - 1)) / kSecsPerHour;
        return i;
    };

    for (const auto& ev : log.events) {
        if (ev.cargo_status != CargoStatus::Empty) continue;
        if (table.classify(ev.iso_code) != category) continue;
        std::int64_t from = first_slot_at_or_after(ev.gate_in);
        std::int64_t to = ev.gate_out ? first_slot_at_or_after(*ev.gate_out) : n;
        from = std::max<std::int64_t>(from, 0);
        to = std::min(to, n);
        if (from >= to) continue;
        ++delta[static_cast<std::size_t>(from)];
        --delta[static_cast<std::size_t>(to)];
    }

    std::vector<std::int64_t> values(index.size());
    std::int64_t running = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        running += delta[i];
        values[i] = running;
    }
    return StockSeries(index, std::move(values), category);
}

}  // namespace yardcast
