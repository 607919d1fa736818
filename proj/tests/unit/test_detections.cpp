#include <doctest.h>

#include "tabsync/detections.hpp"
#include "tabsync/errors.hpp"

using namespace tabsync;

namespace {

std::string wrap_frames(const std::string& frames) {
    return R"({"video": {"fps": 25.0, "width": 1920, "height": 1080}, "frames": )" + frames + "}";
}

const char* kHandQuad = R"([[10, 10], [60, 10], [60, 40], [10, 40]])";

} // namespace

TEST_CASE("minimal file with one hand quad") {
    const auto set = parse_detection_file(wrap_frames(
        std::string(R"([{"index": 57, "detections": [{"label": "hand", "confidence": 0.97, "quad": )") +
        kHandQuad + "}]}]"));
    CHECK(set.video.fps == 25.0);
    CHECK(set.video.width == 1920);
    CHECK(set.video.height == 1080);
    REQUIRE(set.frames.size() == 1);
    CHECK(set.frames[0].index == 57);
    REQUIRE(set.frames[0].detections.size() == 1);
    const auto& d = set.frames[0].detections[0];
    CHECK(d.is_hand());
    CHECK(d.confidence == doctest::Approx(0.97));
    CHECK(polygon_area(d.quad) == doctest::Approx(1500.0));
    CHECK(set.frames[0].has_hand());
}

TEST_CASE("clockwise input is stored counterclockwise with the same area") {
    const auto set = parse_detection_file(wrap_frames(
        R"([{"index": 0, "detections": [{"label": "fret_3", "confidence": 0.5,
             "quad": [[0, 0], [0, 30], [20, 30], [20, 0]]}]}])"));
    const auto& q = set.frames[0].detections[0].quad;
    // Signed shoelace of the raw input is -600.
    CHECK(polygon_area(q) == 600.0);
    CHECK(set.frames[0].detections[0].fret_index() == 3);
}

TEST_CASE("label grammar") {
    auto with_label = [](const std::string& label) {
        return wrap_frames(R"([{"index": 1, "detections": [{"label": ")" + label +
                           R"(", "confidence": 0.5, "quad": )" + kHandQuad + "}]}]");
    };
    CHECK_NOTHROW(parse_detection_file(with_label("fretboard")));
    CHECK_NOTHROW(parse_detection_file(with_label("fret_0")));
    CHECK_NOTHROW(parse_detection_file(with_label("fret_12")));
    CHECK_THROWS_AS(parse_detection_file(with_label("fret_13")), LabelError);
    CHECK_NOTHROW(parse_detection_file(with_label("fret_13"), 24));
    CHECK_THROWS_AS(parse_detection_file(with_label("Hand")), LabelError);
    CHECK_THROWS_AS(parse_detection_file(with_label("fret_")), LabelError);
    CHECK_THROWS_AS(parse_detection_file(with_label("fret_-1")), LabelError);
    CHECK_THROWS_AS(parse_detection_file(with_label("string")), LabelError);
}

TEST_CASE("frames must be strictly increasing") {
    const std::string frames =
        R"([{"index": 5, "detections": []}, {"index": 5, "detections": []}])";
    CHECK_THROWS_AS(parse_detection_file(wrap_frames(frames)), OrderingError);
    const std::string backwards =
        R"([{"index": 5, "detections": []}, {"index": 4, "detections": []}])";
    CHECK_THROWS_AS(parse_detection_file(wrap_frames(backwards)), OrderingError);
}

TEST_CASE("schema violations report a path") {
    auto path_of = [](const std::string& text) -> std::string {
        try {
            parse_detection_file(text);
        } catch (const ParseError& e) {
            return e.path();
        }
        return "<no error>";
    };
    CHECK(path_of("not json") == "");
    CHECK(path_of(R"({"frames": []})") == "");
    CHECK(path_of(R"({"video": {"fps": 0, "width": 1, "height": 1}, "frames": []})") == "video.fps");
    CHECK(path_of(R"({"video": {"fps": 25, "width": 1.5, "height": 1}, "frames": []})") ==
          "video.width");
    CHECK(path_of(wrap_frames(R"([{"detections": []}])")) == "frames[0]");
    CHECK(path_of(wrap_frames(R"([{"index": 2, "detections": [{"label": "hand", "confidence": 1.5,
                                   "quad": [[0,0],[1,0],[1,1],[0,1]]}]}])")) ==
          "frames[0].detections[0].confidence");
    CHECK(path_of(wrap_frames(R"([{"index": 2, "detections": [{"label": "hand", "confidence": 1,
                                   "quad": [[0,0],[1,0],[1,1]]}]}])")) ==
          "frames[0].detections[0].quad");
    CHECK(path_of(wrap_frames(R"([{"index": 2, "detections": [{"label": "hand", "confidence": 1,
                                   "quad": [[0,0],[1,0],[1,"x"],[0,1]]}]}])")) ==
          "frames[0].detections[0].quad[2][1]");
    // Self-intersecting and zero-area quads are rejected at their path.
    CHECK(path_of(wrap_frames(R"([{"index": 2, "detections": [{"label": "hand", "confidence": 1,
                                   "quad": [[0,0],[1,1],[1,0],[0,1]]}]}])")) ==
          "frames[0].detections[0].quad");
    CHECK(path_of(wrap_frames(R"([{"index": 2, "detections": [{"label": "hand", "confidence": 1,
                                   "quad": [[0,0],[1,0],[2,0],[3,0]]}]}])")) ==
          "frames[0].detections[0].quad");
}

TEST_CASE("serialize then parse preserves every field") {
    DetectionSet set;
    set.video = {29.97, 1280, 720};
    DetectionFrame f;
    f.index = 3;
    f.detections.push_back({"hand", 0.875, axis_aligned_quad(1.5, 2.0, 30.25, 40.0)});
    f.detections.push_back({"fret_7", 0.5, axis_aligned_quad(100.0, 0.0, 150.0, 80.0)});
    set.frames.push_back(f);
    f.index = 9;
    set.frames.push_back(f);

    const auto back = parse_detection_file(serialize_detection_file(set));
    CHECK(back.video.fps == set.video.fps);
    CHECK(back.video.width == 1280);
    REQUIRE(back.frames.size() == 2);
    CHECK(back.frames[1].index == 9);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& a = set.frames[0].detections[i];
        const auto& b = back.frames[0].detections[i];
        CHECK(a.label == b.label);
        CHECK(a.confidence == b.confidence);
        for (std::size_t v = 0; v < 4; ++v) CHECK(a.quad.vertices[v] == b.quad.vertices[v]);
    }
}
