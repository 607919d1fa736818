#include "tabsync/detections.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace tabsync {

using nlohmann::json;

namespace {

std::optional<int> parse_fret_label(std::string_view label) {
    constexpr std::string_view prefix = "fret_";
    if (label.size() <= prefix.size() || label.substr(0, prefix.size()) != prefix) {
        return std::nullopt;
    }
    const std::string_view digits = label.substr(prefix.size());
    if (digits.size() > 6 || !std::all_of(digits.begin(), digits.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c)) != 0;
        })) {
        return std::nullopt;
    }
    return std::stoi(std::string(digits));
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) {
        throw ParseError(path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(path, std::string("missing key \"") + key + "\"");
    }
    return *it;
}

double require_number(const json& value, const std::string& path) {
    if (!value.is_number()) {
        throw ParseError(path, "expected a number");
    }
    return value.get<double>();
}

int require_int(const json& value, const std::string& path) {
    if (!value.is_number_integer()) {
        throw ParseError(path, "expected an integer");
    }
    const auto v = value.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ParseError(path, "integer out of range");
    }
    return static_cast<int>(v);
}

Quad parse_quad(const json& value, const std::string& path) {
    if (!value.is_array() || value.size() != 4) {
        throw ParseError(path, "quad must be an array of four [x, y] points");
    }
    Quad quad;
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string vpath = path + "[" + std::to_string(i) + "]";
        const json& pt = value[i];
        if (!pt.is_array() || pt.size() != 2) {
            throw ParseError(vpath, "point must be [x, y]");
        }
        quad.vertices[i] = Point2<double>(require_number(pt[0], vpath + "[0]"),
                                          require_number(pt[1], vpath + "[1]"));
    }
    try {
        return normalize_quad(quad);
    } catch (const DegeneracyError& e) {
        throw ParseError(path, e.what());
    }
}

} // namespace

std::optional<int> Detection::fret_index() const {
    return parse_fret_label(label);
}

bool DetectionFrame::has_hand() const {
    return std::any_of(detections.begin(), detections.end(),
                       [](const Detection& d) { return d.is_hand(); });
}

DetectionSet parse_detection_file(std::string_view text, int max_fret) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("", e.what());
    }

    DetectionSet set;
    const json& video = require(root, "video", "");
    set.video.fps = require_number(require(video, "fps", "video"), "video.fps");
    set.video.width = require_int(require(video, "width", "video"), "video.width");
    set.video.height = require_int(require(video, "height", "video"), "video.height");
    if (!(set.video.fps > 0.0)) {
        throw ParseError("video.fps", "must be positive");
    }
    if (set.video.width <= 0 || set.video.height <= 0) {
        throw ParseError("video", "width and height must be positive");
    }

    const json& frames = require(root, "frames", "");
    if (!frames.is_array()) {
        throw ParseError("frames", "expected an array");
    }
    set.frames.reserve(frames.size());
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const std::string fpath = "frames[" + std::to_string(f) + "]";
        DetectionFrame frame;
        frame.index = require_int(require(frames[f], "index", fpath), fpath + ".index");
        if (frame.index < 0) {
            throw ParseError(fpath + ".index", "must be non-negative");
        }
        if (!set.frames.empty() && frame.index <= set.frames.back().index) {
            throw OrderingError(fpath + ".index",
                                "frame " + std::to_string(frame.index) + " does not follow frame " +
                                    std::to_string(set.frames.back().index));
        }
        const json& dets = require(frames[f], "detections", fpath);
        if (!dets.is_array()) {
            throw ParseError(fpath + ".detections", "expected an array");
        }
        for (std::size_t d = 0; d < dets.size(); ++d) {
            const std::string dpath = fpath + ".detections[" + std::to_string(d) + "]";
            Detection det;
            const json& label = require(dets[d], "label", dpath);
            if (!label.is_string()) {
                throw ParseError(dpath + ".label", "expected a string");
            }
            det.label = label.get<std::string>();
            if (det.label != "hand" && det.label != "fretboard") {
                const auto k = parse_fret_label(det.label);
                if (!k) {
                    throw LabelError(dpath + ".label", "unknown label \"" + det.label + "\"");
                }
                if (*k > max_fret) {
                    throw LabelError(dpath + ".label", "\"" + det.label + "\" exceeds max fret " +
                                                           std::to_string(max_fret));
                }
            }
            det.confidence =
                require_number(require(dets[d], "confidence", dpath), dpath + ".confidence");
            if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
                throw ParseError(dpath + ".confidence", "must lie in [0, 1]");
            }
            det.quad = parse_quad(require(dets[d], "quad", dpath), dpath + ".quad");
            frame.detections.push_back(std::move(det));
        }
        set.frames.push_back(std::move(frame));
    }
    return set;
}

DetectionSet read_detection_file(const std::string& path, int max_fret) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_detection_file(buf.str(), max_fret);
}

std::string serialize_detection_file(const DetectionSet& set) {
    json frames = json::array();
    for (const auto& frame : set.frames) {
        json dets = json::array();
        for (const auto& det : frame.detections) {
            json quad = json::array();
            for (const auto& v : det.quad.vertices) {
                quad.push_back({v.x(), v.y()});
            }
            dets.push_back({{"label", det.label}, {"confidence", det.confidence}, {"quad", quad}});
        }
        frames.push_back({{"index", frame.index}, {"detections", dets}});
    }
    const json root = {
        {"video", {{"fps", set.video.fps}, {"width", set.video.width}, {"height", set.video.height}}},
        {"frames", frames}};
    return root.dump() + "\n";
}

} // namespace tabsync
