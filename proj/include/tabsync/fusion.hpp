#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tabsync/audio.hpp"
#include "tabsync/detections.hpp"
#include "tabsync/fretboard.hpp"
#include "tabsync/tab.hpp"

namespace tabsync {

struct NoteEvent {
    OnsetEvent onset;
    std::vector<PitchEstimate> pitches;  // ranked, pitches[0] is rank 1
    NotePitch note;
    int frame_index = 0;
};

struct ZonePrediction {
    int zone = 0;
    double score = 0.0;  // IoU of the hand against the winning fret quad
    int source_frame = 0;
    int fret_label = 0;  // k of the winning fret_<k> quad
};

struct FusionConfig {
    int search_radius = 3;  // frames
};

/// ceil(time_s * fps); products within 1e-9 of an integer snap to it.
int onset_to_frame(double time_s, double fps);

/// Closest frame to `target` within +/- radius that has a hand detection.
/// Earlier frames win distance ties. Throws NoDetectionError.
const DetectionFrame& select_detection_frame(std::span<const DetectionFrame> frames, int target,
                                             int radius);

/// Argmax IoU between the most confident hand and each fret_<k> quad,
/// mapped through zone_of_fret. Throws InsufficientDetectionsError when
/// either kind of detection is missing or the hand overlaps no fret quad.
ZonePrediction predict_zone(const DetectionFrame& frame, const FretboardModel& model);

/// Prefers candidates inside the predicted zone, then the one nearest the
/// zone centre; lowest string breaks ties. Throws UnplayableNoteError on an
/// empty candidate set.
FretPosition resolve_position(std::span<const FretPosition> candidates, const ZonePrediction& zone,
                              const FretboardModel& model);

/// Lowest fret, lowest string on ties.
FretPosition fallback_position(std::span<const FretPosition> candidates);

struct TranscribedNote {
    NoteEvent event;
    std::optional<ZonePrediction> zone;  // empty when the fallback was used
    FretPosition position;
};

struct Transcription {
    std::vector<TranscribedNote> notes;
    std::size_t onset_count = 0;
    bool audio_only = false;

    /// No onsets were found at all; distinct from onsets that resolved to
    /// no playable note.
    bool empty() const { return onset_count == 0; }
    std::vector<TabEvent> tab_events() const;
};

/// Full pipeline. `detections` may be absent, in which case every note uses
/// the lowest-fret fallback and `fps` only sets the frame column.
Transcription transcribe_detailed(const AudioBuffer& audio, const DetectionSet* detections,
                                  double fps, const FretboardModel& model,
                                  const AnalysisConfig& config, const FusionConfig& fusion = {});

std::vector<TabEvent> transcribe(const AudioBuffer& audio, const DetectionSet& detections,
                                 const FretboardModel& model, const AnalysisConfig& config);

} // namespace tabsync
