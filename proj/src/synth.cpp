#include "tabsync/synth.hpp"
#include "tabsync/errors.hpp"
#include "tabsync/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tabsync {

AudioBuffer synth_note(double frequency_hz, double duration_s, const SynthSpec& spec) {
    if (spec.sample_rate <= 0 || spec.harmonics < 1) {
        throw SpecError("synth: sample_rate and harmonics must be positive");
    }
    const double sr = spec.sample_rate;
    const double nyquist = sr / 2.0;
    if (!(frequency_hz > 0.0) || !(frequency_hz < nyquist)) {
        throw DomainError("synth_note: frequency must lie in (0, Nyquist)");
    }
    if (!(duration_s > 0.0)) {
        throw SpecError("synth_note: duration must be positive");
    }

    const auto n = static_cast<Eigen::Index>(std::lround(duration_s * sr));
    const double attack = std::max(spec.attack_ms * 1e-3 * sr, 1.0);
    const double release = std::max(spec.release_ms * 1e-3 * sr, 0.0);
    const double length = static_cast<double>(n);

    AudioBuffer out;
    out.sample_rate = spec.sample_rate;
    out.samples = Eigen::ArrayXd::Zero(n);
    for (int k = 1; k <= spec.harmonics; ++k) {
        const double partial = k * frequency_hz;
        if (partial >= nyquist) {
            break;
        }
        const double w = 2.0 * std::numbers::pi * partial / sr;
        for (Eigen::Index i = 0; i < n; ++i) {
            out.samples(i) += std::sin(w * static_cast<double>(i)) / k;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        double env = std::min(t / attack, 1.0) * std::exp(-t / (spec.decay_s * sr));
        if (release > 0.0) {
            env *= std::clamp((length - t) / release, 0.0, 1.0);
        }
        out.samples(i) *= env;
    }
    const double peak = out.samples.abs().maxCoeff();
    if (peak > 0.0) {
        out.samples *= 0.8 / peak;
    }
    return out;
}

Quad synthetic_fret_quad(const DetectionLayout& layout, int fret) {
    const double x0 = layout.origin_x + fret * layout.fret_width;
    return axis_aligned_quad(x0, layout.origin_y, x0 + layout.fret_width,
                             layout.origin_y + layout.fret_height);
}

Quad synthetic_hand_quad(const DetectionLayout& layout, int fret, int max_frets) {
    const double shift = (fret < max_frets ? 1.0 : -1.0) * layout.fret_width / 9.0;
    return synthetic_fret_quad(layout, fret).translated(Point2<double>(shift, 0.0));
}

SynthPerformance synth_performance(const SynthSpec& spec, const FretboardModel& model,
                                   const DetectionLayout& layout) {
    model.validate();
    if (!(layout.video.fps > 0.0)) {
        throw SpecError("synth: fps must be positive");
    }

    std::vector<SynthNote> events = spec.events;
    std::stable_sort(events.begin(), events.end(),
                     [](const SynthNote& a, const SynthNote& b) { return a.time_s < b.time_s; });
    for (const auto& e : events) {
        if (!(e.time_s >= 0.0) || !(e.duration_s > 0.0)) {
            throw SpecError("synth: events need time >= 0 and duration > 0");
        }
        if (e.position.string < 1 || e.position.string > kStringCount || e.position.fret < 0 ||
            e.position.fret > model.max_frets) {
            throw SpecError("synth: position out of range for the fretboard");
        }
    }
    for (int s = 1; s <= kStringCount; ++s) {
        double busy_until = -1.0;
        for (const auto& e : events) {
            if (e.position.string != s) {
                continue;
            }
            if (e.time_s < busy_until) {
                throw SpecError("synth: overlapping events on string " + std::to_string(s));
            }
            busy_until = e.time_s + e.duration_s;
        }
    }

    SynthPerformance perf;
    perf.tab.tuning = model.tuning;
    perf.detections.video = layout.video;

    double end_s = 0.0;
    for (const auto& e : events) {
        end_s = std::max(end_s, e.time_s + e.duration_s);
    }
    const double sr = spec.sample_rate;
    perf.audio.sample_rate = spec.sample_rate;
    perf.audio.samples =
        Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(std::lround((end_s + spec.tail_s) * sr)));

    for (const auto& e : events) {
        const AudioBuffer note = synth_note(position_frequency(model, e.position), e.duration_s, spec);
        const auto offset = static_cast<Eigen::Index>(std::lround(e.time_s * sr));
        const Eigen::Index count = std::min(note.size(), perf.audio.size() - offset);
        perf.audio.samples.segment(offset, count) += note.samples.head(count);
        perf.tab.events.push_back({e.time_s, e.position.string, e.position.fret});
    }
    if (perf.audio.size() > 0) {
        const double peak = perf.audio.samples.abs().maxCoeff();
        if (peak > 0.8) {
            perf.audio.samples *= 0.8 / peak;
        }
    }

    // The hand sits on an event's fret from hand_lead_s before its pluck
    // until the lead-in of the next event.
    const double fps = layout.video.fps;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        const int first = onset_to_frame(std::max(0.0, e.time_s - layout.hand_lead_s), fps);
        int last = onset_to_frame(e.time_s + e.duration_s, fps);
        if (i + 1 < events.size()) {
            last = onset_to_frame(std::max(0.0, events[i + 1].time_s - layout.hand_lead_s), fps) - 1;
        }
        // A later event takes over frames an earlier span already claimed.
        while (!perf.detections.frames.empty() && perf.detections.frames.back().index >= first) {
            perf.detections.frames.pop_back();
        }
        for (int index = first; index <= last; ++index) {
            DetectionFrame frame;
            frame.index = index;
            const Quad board = axis_aligned_quad(
                layout.origin_x, layout.origin_y,
                layout.origin_x + (model.max_frets + 1) * layout.fret_width,
                layout.origin_y + layout.fret_height);
            frame.detections.push_back({"fretboard", 0.99, board});
            for (int k = 0; k <= model.max_frets; ++k) {
                frame.detections.push_back(
                    {"fret_" + std::to_string(k), 0.95, synthetic_fret_quad(layout, k)});
            }
            frame.detections.push_back(
                {"hand", 0.97, synthetic_hand_quad(layout, e.position.fret, model.max_frets)});
            perf.detections.frames.push_back(std::move(frame));
        }
    }
    return perf;
}

} // namespace tabsync
