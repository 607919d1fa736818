#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabsync/geometry.hpp"

namespace tabsync {

struct VideoMeta {
    double fps = 25.0;
    int width = 1920;
    int height = 1080;
};

struct Detection {
    std::string label;  // "hand", "fretboard" or "fret_<k>"
    double confidence = 1.0;
    Quad quad;

    bool is_hand() const { return label == "hand"; }
    /// k for a "fret_<k>" label.
    std::optional<int> fret_index() const;
};

struct DetectionFrame {
    int index = 0;
    std::vector<Detection> detections;

    bool has_hand() const;
};

struct DetectionSet {
    VideoMeta video;
    std::vector<DetectionFrame> frames;
};

/// Schema-checked parse of the detection interchange JSON. Quads come back
/// counterclockwise. `max_fret` bounds the k in "fret_<k>" labels.
DetectionSet parse_detection_file(std::string_view text, int max_fret = 12);

DetectionSet read_detection_file(const std::string& path, int max_fret = 12);

/// Inverse of parse_detection_file.
std::string serialize_detection_file(const DetectionSet& set);

} // namespace tabsync
