#pragma once

#include <vector>

#include "tabsync/audio.hpp"
#include "tabsync/detections.hpp"
#include "tabsync/fretboard.hpp"
#include "tabsync/tab.hpp"

namespace tabsync {

struct SynthNote {
    double time_s = 0.0;
    FretPosition position;
    double duration_s = 0.5;
};

struct SynthSpec {
    std::vector<SynthNote> events;
    int harmonics = 5;          // partial k has amplitude 1/k
    double attack_ms = 5.0;
    double decay_s = 0.6;       // exponential time constant
    double release_ms = 30.0;   // linear fade at the end of each note
    double tail_s = 0.5;        // silence after the last note
    int sample_rate = 22050;
};

/// Where the synthetic fretboard sits in the virtual video frame.
struct DetectionLayout {
    VideoMeta video{25.0, 1920, 1080};
    double origin_x = 120.0;
    double origin_y = 440.0;
    double fret_width = 120.0;
    double fret_height = 200.0;
    double hand_lead_s = 0.05;  // the hand settles this long before the pluck
};

/// Harmonic tone with a linear attack, exponential decay and a short
/// release, peak-normalized to 0.8. Partials at or above Nyquist are
/// dropped.
AudioBuffer synth_note(double frequency_hz, double duration_s, const SynthSpec& spec);

struct SynthPerformance {
    AudioBuffer audio;
    DetectionSet detections;
    TabDocument tab;
};

/// Renders a performance plus matching detections: every frame of an
/// event's span carries fret_0..fret_<max> quads and a hand quad with IoU
/// 0.8 against the fret being played.
SynthPerformance synth_performance(const SynthSpec& spec, const FretboardModel& model,
                                   const DetectionLayout& layout = {});

/// Fret quad k of the synthetic layout.
Quad synthetic_fret_quad(const DetectionLayout& layout, int fret);

/// Hand quad aimed at `fret`: one fret wide, shifted 1/9 of a fret toward a
/// neighbour so that IoU(hand, fret) = 0.8 and IoU(hand, neighbour) = 1/17.
Quad synthetic_hand_quad(const DetectionLayout& layout, int fret, int max_frets);

} // namespace tabsync
