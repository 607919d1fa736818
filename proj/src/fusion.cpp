#include "tabsync/fusion.hpp"
#include "tabsync/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace tabsync {

int onset_to_frame(double time_s, double fps) {
    if (!(time_s >= 0.0) || !std::isfinite(time_s)) {
        throw DomainError("onset_to_frame: time must be non-negative");
    }
    if (!(fps > 0.0)) {
        throw DomainError("onset_to_frame: fps must be positive");
    }
    const double product = time_s * fps;
    const double nearest = std::round(product);
    if (std::abs(product - nearest) <= 1e-9) {
        return static_cast<int>(nearest);
    }
    return static_cast<int>(std::ceil(product));
}

const DetectionFrame& select_detection_frame(std::span<const DetectionFrame> frames, int target,
                                             int radius) {
    if (radius < 0) {
        throw DomainError("select_detection_frame: radius must be non-negative");
    }
    const DetectionFrame* best = nullptr;
    int best_distance = radius + 1;
    for (const auto& frame : frames) {
        const int distance = std::abs(frame.index - target);
        if (distance > radius || !frame.has_hand()) {
            continue;
        }
        if (distance < best_distance || (distance == best_distance && frame.index < best->index)) {
            best = &frame;
            best_distance = distance;
        }
    }
    if (best == nullptr) {
        throw NoDetectionError("no frame with a hand detection within " + std::to_string(radius) +
                               " frames of " + std::to_string(target));
    }
    return *best;
}

ZonePrediction predict_zone(const DetectionFrame& frame, const FretboardModel& model) {
    const Detection* hand = nullptr;
    for (const auto& det : frame.detections) {
        if (det.is_hand() && (hand == nullptr || det.confidence > hand->confidence)) {
            hand = &det;
        }
    }
    if (hand == nullptr) {
        throw InsufficientDetectionsError("frame " + std::to_string(frame.index) + " has no hand");
    }

    int best_fret = -1;
    double best_iou = 0.0;
    bool any_fret = false;
    for (const auto& det : frame.detections) {
        const auto k = det.fret_index();
        if (!k || *k > model.max_frets) {
            continue;
        }
        any_fret = true;
        const double iou = polygon_iou(hand->quad, det.quad);
        if (iou > best_iou || (iou == best_iou && best_fret >= 0 && *k < best_fret)) {
            best_iou = iou;
            best_fret = *k;
        }
    }
    if (!any_fret) {
        throw InsufficientDetectionsError("frame " + std::to_string(frame.index) +
                                          " has no fret detections");
    }
    if (best_fret < 0 || !(best_iou > 0.0)) {
        throw InsufficientDetectionsError("hand overlaps no fret zone in frame " +
                                          std::to_string(frame.index));
    }
    return {zone_of_fret(model, best_fret), best_iou, frame.index, best_fret};
}

FretPosition resolve_position(std::span<const FretPosition> candidates, const ZonePrediction& zone,
                              const FretboardModel& model) {
    if (candidates.empty()) {
        throw UnplayableNoteError("note has no playable position");
    }
    const FretPosition* in_zone = nullptr;
    for (const auto& c : candidates) {
        if (c.fret <= model.max_frets && zone_of_fret(model, c.fret) == zone.zone &&
            (in_zone == nullptr || c.string < in_zone->string)) {
            in_zone = &c;
        }
    }
    if (in_zone != nullptr) {
        return *in_zone;
    }

    const double centre = zone_center(model, zone.zone);
    const FretPosition* nearest = nullptr;
    double nearest_distance = 0.0;
    for (const auto& c : candidates) {
        const double distance = std::abs(c.fret - centre);
        if (nearest == nullptr || distance < nearest_distance ||
            (distance == nearest_distance && c.string < nearest->string)) {
            nearest = &c;
            nearest_distance = distance;
        }
    }
    return *nearest;
}

FretPosition fallback_position(std::span<const FretPosition> candidates) {
    if (candidates.empty()) {
        throw UnplayableNoteError("note has no playable position");
    }
    return *std::min_element(candidates.begin(), candidates.end(),
                             [](const FretPosition& a, const FretPosition& b) {
                                 return a.fret != b.fret ? a.fret < b.fret : a.string < b.string;
                             });
}

std::vector<TabEvent> Transcription::tab_events() const {
    std::vector<TabEvent> out;
    out.reserve(notes.size());
    for (const auto& n : notes) {
        out.push_back({n.event.onset.time_s, n.position.string, n.position.fret});
    }
    return out;
}

Transcription transcribe_detailed(const AudioBuffer& input, const DetectionSet* detections,
                                  double fps, const FretboardModel& model,
                                  const AnalysisConfig& config, const FusionConfig& fusion) {
    config.validate();
    model.validate();
    if (!(fps > 0.0)) {
        if (detections == nullptr) {
            throw ConfigError("fps must come from the detection file or an explicit override");
        }
        fps = detections->video.fps;
    }

    const AudioBuffer audio = resample_linear(input, config.sample_rate);
    const auto onsets = detect_onsets(audio, config);

    Transcription result;
    result.onset_count = onsets.size();
    result.audio_only = detections == nullptr;
    for (const auto& onset : onsets) {
        auto pitches = pitches_at(audio, onset.time_s, config);
        if (pitches.empty()) {
            continue;
        }
        TranscribedNote item;
        item.event.onset = onset;
        item.event.note = freq_to_note(pitches.front().frequency_hz, model.reference_hz);
        item.event.pitches = std::move(pitches);
        item.event.frame_index = onset_to_frame(onset.time_s, fps);

        const auto candidates = candidate_positions(model, item.event.note.midi);
        if (candidates.empty()) {
            continue;
        }
        if (detections != nullptr) {
            try {
                const auto& frame = select_detection_frame(detections->frames,
                                                           item.event.frame_index,
                                                           fusion.search_radius);
                item.zone = predict_zone(frame, model);
                item.position = resolve_position(candidates, *item.zone, model);
            } catch (const NoDetectionError&) {
                item.zone.reset();
            } catch (const InsufficientDetectionsError&) {
                item.zone.reset();
            }
        }
        if (!item.zone) {
            item.position = fallback_position(candidates);
        }
        result.notes.push_back(std::move(item));
    }
    return result;
}

std::vector<TabEvent> transcribe(const AudioBuffer& audio, const DetectionSet& detections,
                                 const FretboardModel& model, const AnalysisConfig& config) {
    return transcribe_detailed(audio, &detections, 0.0, model, config).tab_events();
}

} // namespace tabsync
