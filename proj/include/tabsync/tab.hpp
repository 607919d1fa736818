#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tabsync/fretboard.hpp"

namespace tabsync {

struct TabEvent {
    double time_s = 0.0;
    int string = 1;
    int fret = 0;

    friend bool operator==(const TabEvent&, const TabEvent&) = default;
};

struct TabDocument {
    std::vector<TabEvent> events;  // ascending time
    Tuning tuning;
    double columns_per_second = 4.0;
};

struct RenderedTab {
    std::string text;  // six LF-terminated lines
    std::vector<std::string> warnings;
};

/// Six-line ASCII tablature, string 1 on top. Each event's fret number is
/// written at column round(time_s * columns_per_second) past the "e|"
/// prefix. When two events on one string overlap, the later one is kept and
/// a warning is recorded.
RenderedTab render_ascii(const TabDocument& doc);

/// {"tuning": [...], "events": [{"time_s", "string", "fret"}, ...]} with
/// times rounded to the millisecond.
std::string export_events(const TabDocument& doc);

/// Inverse of export_events. Throws ParseError on schema violations.
TabDocument parse_events(std::string_view text);

} // namespace tabsync
