#include "tabsync/fretboard.hpp"
#include "tabsync/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace tabsync {

namespace {

constexpr std::array<const char*, 12> kPitchClasses{"C",  "C#", "D",  "D#", "E",  "F",
                                                    "F#", "G",  "G#", "A",  "A#", "B"};

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

} // namespace

void Tuning::validate() const {
    for (int midi : open_string_midi) {
        if (midi < 21 || midi > 96) {
            throw RangeError("tuning: open string MIDI " + std::to_string(midi) +
                             " outside [21, 96]");
        }
    }
}

void FretboardModel::validate() const {
    tuning.validate();
    if (max_frets < 1) {
        throw ConfigError("max_frets must be >= 1");
    }
    if (num_zones < 1 || num_zones > max_frets + 1) {
        throw ConfigError("num_zones must be in [1, max_frets + 1]");
    }
    if (!(reference_hz > 0.0)) {
        throw ConfigError("reference pitch must be positive");
    }
}

double tempered_frequency(int midi, double reference_hz) {
    return reference_hz * std::exp2((midi - 69) / 12.0);
}

std::string pitch_class_name(int midi) {
    const int pc = midi - 12 * floor_div(midi, 12);
    return kPitchClasses[static_cast<std::size_t>(pc)];
}

std::string note_name(int midi) {
    return pitch_class_name(midi) + std::to_string(floor_div(midi, 12) - 1);
}

int parse_note_name(std::string_view text) {
    if (text.empty()) {
        throw ParseError("", "empty note name");
    }
    static constexpr std::array<int, 7> kNatural{9, 11, 0, 2, 4, 5, 7};  // A..G
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (letter < 'A' || letter > 'G') {
        throw ParseError("", "bad note letter in '" + std::string(text) + "'");
    }
    int pc = kNatural[static_cast<std::size_t>(letter - 'A')];
    std::size_t i = 1;
    if (i < text.size() && (text[i] == '#' || text[i] == 'b')) {
        pc += text[i] == '#' ? 1 : -1;
        ++i;
    }
    if (i >= text.size()) {
        throw ParseError("", "missing octave in '" + std::string(text) + "'");
    }
    std::string digits(text.substr(i));
    if (!std::all_of(digits.begin(), digits.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c)) || c == '-';
        })) {
        throw ParseError("", "bad octave in '" + std::string(text) + "'");
    }
    const int octave = std::stoi(digits);
    return 12 * (octave + 1) + pc;
}

Tuning parse_tuning(std::string_view text, TuningOrder order) {
    std::vector<int> notes;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '#' || text[j] == 'b')) {
            ++j;
        }
        if (j < text.size() && text[j] == '-') {
            ++j;
        }
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
            ++j;
        }
        notes.push_back(parse_note_name(text.substr(i, j - i)));
        i = j;
    }
    if (notes.size() != kStringCount) {
        throw ParseError("", "tuning '" + std::string(text) + "' must name six strings, got " +
                                 std::to_string(notes.size()));
    }
    if (order == TuningOrder::LowToHigh) {
        std::reverse(notes.begin(), notes.end());
    }
    Tuning tuning;
    std::copy(notes.begin(), notes.end(), tuning.open_string_midi.begin());
    tuning.validate();
    return tuning;
}

NotePitch freq_to_note(double frequency_hz, double reference_hz) {
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
        throw DomainError("freq_to_note: frequency must be positive");
    }
    const double semis = 12.0 * std::log2(frequency_hz / reference_hz) + 69.0;
    const int midi = static_cast<int>(std::floor(semis + 0.5));
    NotePitch note;
    note.midi = midi;
    note.name = note_name(midi);
    note.cents_offset = 1200.0 * std::log2(frequency_hz / tempered_frequency(midi, reference_hz));
    // log2 rounding can land a hair outside the half-open range.
    if (note.cents_offset >= 50.0) {
        note.cents_offset = std::nextafter(50.0, 0.0);
    } else if (note.cents_offset < -50.0) {
        note.cents_offset = -50.0;
    }
    return note;
}

double position_frequency(const FretboardModel& model, FretPosition pos) {
    if (pos.string < 1 || pos.string > kStringCount) {
        throw RangeError("string " + std::to_string(pos.string) + " outside 1..6");
    }
    if (pos.fret < 0 || pos.fret > model.max_frets) {
        throw RangeError("fret " + std::to_string(pos.fret) + " outside 0.." +
                         std::to_string(model.max_frets));
    }
    return tempered_frequency(model.tuning.open(pos.string), model.reference_hz) *
           std::exp2(pos.fret / 12.0);
}

std::vector<FretPosition> candidate_positions(const FretboardModel& model, int midi) {
    std::vector<FretPosition> out;
    for (int s = 1; s <= kStringCount; ++s) {
        const int fret = midi - model.tuning.open(s);
        if (fret >= 0 && fret <= model.max_frets) {
            out.push_back({s, fret});
        }
    }
    return out;
}

int zone_of_fret(const FretboardModel& model, int fret) {
    if (fret < 0 || fret > model.max_frets) {
        throw RangeError("zone_of_fret: fret " + std::to_string(fret) + " outside 0.." +
                         std::to_string(model.max_frets));
    }
    // floor(f / (max_frets / num_zones)) evaluated exactly in integers.
    const int zone = fret * model.num_zones / model.max_frets;
    return std::min(zone, model.num_zones - 1);
}

double zone_center(const FretboardModel& model, int zone) {
    return (zone + 0.5) * model.zone_width();
}

} // namespace tabsync
