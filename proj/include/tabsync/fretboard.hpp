#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace tabsync {

constexpr int kStringCount = 6;

/// Open-string MIDI notes, index 0 = string 1 (highest pitch).
struct Tuning {
    std::array<int, kStringCount> open_string_midi{64, 59, 55, 50, 45, 40};

    static Tuning standard() { return {}; }
    void validate() const;
    int open(int string) const { return open_string_midi.at(static_cast<std::size_t>(string - 1)); }

    friend bool operator==(const Tuning&, const Tuning&) = default;
};

enum class TuningOrder { LowToHigh, HighToLow };

/// Parses six concatenated note names such as "E2A2D3G3B3E4". Sharps ('#')
/// and flats ('b') are accepted.
Tuning parse_tuning(std::string_view text, TuningOrder order = TuningOrder::LowToHigh);

struct FretboardModel {
    Tuning tuning;
    int max_frets = 12;
    int num_zones = 12;
    double reference_hz = 440.0;  // A4

    void validate() const;
    double zone_width() const { return static_cast<double>(max_frets) / num_zones; }
};

struct NotePitch {
    int midi = 0;
    std::string name;
    double cents_offset = 0.0;
};

struct FretPosition {
    int string = 1;
    int fret = 0;

    friend auto operator<=>(const FretPosition&, const FretPosition&) = default;
};

double tempered_frequency(int midi, double reference_hz = 440.0);

/// "C4" for MIDI 60; sharps only.
std::string note_name(int midi);

/// Pitch class of `midi` without the octave ("C#").
std::string pitch_class_name(int midi);

/// Parses a note name like "E4", "F#3" or "Bb2" to a MIDI number.
int parse_note_name(std::string_view text);

NotePitch freq_to_note(double frequency_hz, double reference_hz = 440.0);

double position_frequency(const FretboardModel& model, FretPosition pos);

/// Every (string, fret) that sounds `midi`, ascending by string.
std::vector<FretPosition> candidate_positions(const FretboardModel& model, int midi);

/// Zone index floor(f / (max_frets / num_zones)), clamped to num_zones - 1.
int zone_of_fret(const FretboardModel& model, int fret);

/// (zone + 0.5) * zone_width, in frets.
double zone_center(const FretboardModel& model, int zone);

} // namespace tabsync
