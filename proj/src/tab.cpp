#include "tabsync/tab.hpp"
#include "tabsync/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace tabsync {

namespace {

constexpr int kMinimumColumns = 8;

struct Placed {
    int column;
    std::string digits;
    TabEvent event;
};

void check_event(const TabEvent& e) {
    if (e.string < 1 || e.string > kStringCount || e.fret < 0 || !(e.time_s >= 0.0)) {
        throw RangeError("tab event out of range: t=" + std::to_string(e.time_s) +
                         " string=" + std::to_string(e.string) + " fret=" + std::to_string(e.fret));
    }
}

} // namespace

RenderedTab render_ascii(const TabDocument& doc) {
    std::vector<TabEvent> events = doc.events;
    std::stable_sort(events.begin(), events.end(),
                     [](const TabEvent& a, const TabEvent& b) { return a.time_s < b.time_s; });

    RenderedTab result;
    std::array<std::vector<Placed>, kStringCount> lines;
    for (const auto& e : events) {
        check_event(e);
        const int column = static_cast<int>(std::lround(e.time_s * doc.columns_per_second));
        Placed item{column, std::to_string(e.fret), e};
        auto& line = lines[static_cast<std::size_t>(e.string - 1)];
        const int end = column + static_cast<int>(item.digits.size());
        std::erase_if(line, [&](const Placed& p) {
            const int p_end = p.column + static_cast<int>(p.digits.size());
            if (p.column < end && column < p_end) {
                std::ostringstream msg;
                msg << "string " << e.string << ": fret " << p.event.fret << " at "
                    << p.event.time_s << " s overwritten by fret " << e.fret << " at " << e.time_s
                    << " s (column " << column << ")";
                result.warnings.push_back(msg.str());
                return true;
            }
            return false;
        });
        line.push_back(std::move(item));
    }

    int width = kMinimumColumns;
    for (const auto& line : lines) {
        for (const auto& p : line) {
            width = std::max(width, p.column + static_cast<int>(p.digits.size()) + 1);
        }
    }

    std::array<std::string, kStringCount> names;
    std::size_t name_width = 0;
    for (int s = 1; s <= kStringCount; ++s) {
        std::string name = pitch_class_name(doc.tuning.open(s));
        if (s == 1) {
            name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[0])));
        }
        name_width = std::max(name_width, name.size());
        names[static_cast<std::size_t>(s - 1)] = std::move(name);
    }

    std::string text;
    for (int s = 0; s < kStringCount; ++s) {
        std::string body(static_cast<std::size_t>(width), '-');
        for (const auto& p : lines[static_cast<std::size_t>(s)]) {
            body.replace(static_cast<std::size_t>(p.column), p.digits.size(), p.digits);
        }
        std::string prefix = names[static_cast<std::size_t>(s)];
        prefix.resize(name_width, ' ');
        text += prefix + "|" + body + "\n";
    }
    result.text = std::move(text);
    return result;
}

std::string export_events(const TabDocument& doc) {
    nlohmann::ordered_json root;
    root["tuning"] = doc.tuning.open_string_midi;
    auto events = nlohmann::ordered_json::array();
    for (const auto& e : doc.events) {
        nlohmann::ordered_json item;
        item["time_s"] = std::round(e.time_s * 1000.0) / 1000.0;
        item["string"] = e.string;
        item["fret"] = e.fret;
        events.push_back(std::move(item));
    }
    root["events"] = std::move(events);
    return root.dump();
}

TabDocument parse_events(std::string_view text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("", e.what());
    }
    if (!root.is_object()) {
        throw ParseError("", "expected an object");
    }

    TabDocument doc;
    if (root.contains("tuning")) {
        const auto& tuning = root["tuning"];
        if (!tuning.is_array() || tuning.size() != kStringCount) {
            throw ParseError("tuning", "expected six MIDI numbers");
        }
        for (std::size_t i = 0; i < kStringCount; ++i) {
            if (!tuning[i].is_number_integer()) {
                throw ParseError("tuning[" + std::to_string(i) + "]", "expected an integer");
            }
            doc.tuning.open_string_midi[i] = tuning[i].get<int>();
        }
        doc.tuning.validate();
    }

    const auto it = root.find("events");
    if (it == root.end() || !it->is_array()) {
        throw ParseError("events", "expected an array");
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string path = "events[" + std::to_string(i) + "]";
        const auto& item = (*it)[i];
        if (!item.is_object() || !item.contains("time_s") || !item.contains("string") ||
            !item.contains("fret")) {
            throw ParseError(path, "expected {time_s, string, fret}");
        }
        if (!item["time_s"].is_number() || !item["string"].is_number_integer() ||
            !item["fret"].is_number_integer()) {
            throw ParseError(path, "wrong field types");
        }
        TabEvent e{item["time_s"].get<double>(), item["string"].get<int>(), item["fret"].get<int>()};
        try {
            check_event(e);
        } catch (const RangeError& err) {
            throw ParseError(path, err.what());
        }
        doc.events.push_back(e);
    }
    return doc;
}

} // namespace tabsync
