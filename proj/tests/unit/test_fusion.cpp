#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tabsync/errors.hpp"
#include "tabsync/fusion.hpp"
#include "tabsync/synth.hpp"

using namespace tabsync;

namespace {

DetectionFrame frame_with(int index, std::vector<Detection> dets) {
    return {index, std::move(dets)};
}

Detection hand(const Quad& q, double conf = 0.9) { return {"hand", conf, q}; }
Detection fret(int k, const Quad& q) { return {"fret_" + std::to_string(k), 0.9, q}; }

Quad fret_box(int k) { return axis_aligned_quad(100.0 * k, 0.0, 100.0 * (k + 1), 50.0); }

} // namespace

TEST_CASE("onset_to_frame") {
    CHECK(onset_to_frame(2.2639455, 25) == 57);
    CHECK(onset_to_frame(4.6207700, 25) == 116);
    CHECK(onset_to_frame(2.0, 25) == 50);
    CHECK(onset_to_frame(0.12, 25) == 3);  // 0.12 * 25 = 3.0000000000000004
    CHECK(onset_to_frame(0.0, 25) == 0);
    CHECK_THROWS_AS(onset_to_frame(-0.1, 25), DomainError);
    CHECK_THROWS_AS(onset_to_frame(1.0, 0), DomainError);
}

TEST_CASE("onset_to_frame is a ceiling and monotone") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (double fps : {24.0, 25.0, 29.97, 30.0, 60.0}) {
        std::vector<double> times(500);
        for (auto& t : times) t = u(rng);
        std::sort(times.begin(), times.end());
        int prev = -1;
        for (double t : times) {
            const int f = onset_to_frame(t, fps);
            CHECK(f >= prev);
            const double ahead = f - t * fps;
            CHECK(ahead > -1e-9);
            CHECK(ahead < 1.0);
            prev = f;
        }
    }
}

TEST_CASE("select_detection_frame") {
    const Detection h = hand(fret_box(0));
    std::vector<DetectionFrame> frames{frame_with(56, {h}), frame_with(57, {h}), frame_with(58, {h})};
    CHECK(select_detection_frame(frames, 57, 3).index == 57);

    frames = {frame_with(55, {h}), frame_with(59, {h})};
    CHECK(select_detection_frame(frames, 57, 3).index == 55);

    frames = {frame_with(50, {h})};
    CHECK_THROWS_AS(select_detection_frame(frames, 57, 3), NoDetectionError);

    // Frames without a hand do not qualify, even on an exact hit.
    frames = {frame_with(57, {fret(3, fret_box(3))}), frame_with(58, {h})};
    CHECK(select_detection_frame(frames, 57, 3).index == 58);
    CHECK_THROWS_AS(select_detection_frame(frames, 57, -1), DomainError);
}

TEST_CASE("predict_zone: contained hand") {
    const FretboardModel model;
    const Quad inside = axis_aligned_quad(320.0, 10.0, 370.0, 40.0);
    const auto frame =
        frame_with(7, {fret(2, fret_box(2)), fret(3, fret_box(3)), fret(4, fret_box(4)), hand(inside)});
    const ZonePrediction z = predict_zone(frame, model);
    CHECK(z.zone == zone_of_fret(model, 3));
    CHECK(z.fret_label == 3);
    CHECK(z.source_frame == 7);
    CHECK(z.score == doctest::Approx(polygon_area(inside) / polygon_area(fret_box(3))));
}

TEST_CASE("predict_zone: ties go to the lower fret") {
    const FretboardModel model;
    // Straddles the gap between fret_2 and fret_4 equally; fret_3 absent.
    const Quad h = axis_aligned_quad(250.0, 0.0, 450.0, 50.0);
    const auto frame = frame_with(1, {fret(4, fret_box(4)), fret(2, fret_box(2)), hand(h)});
    const ZonePrediction z = predict_zone(frame, model);
    CHECK(z.fret_label == 2);
    CHECK(z.zone == 2);
}

TEST_CASE("predict_zone: most confident hand wins") {
    const FretboardModel model;
    const auto frame = frame_with(
        1, {fret(1, fret_box(1)), fret(6, fret_box(6)), hand(fret_box(1), 0.4), hand(fret_box(6), 0.8)});
    CHECK(predict_zone(frame, model).fret_label == 6);
}

TEST_CASE("predict_zone errors") {
    const FretboardModel model;
    CHECK_THROWS_AS(predict_zone(frame_with(1, {fret(1, fret_box(1))}), model),
                    InsufficientDetectionsError);
    CHECK_THROWS_AS(predict_zone(frame_with(1, {hand(fret_box(1))}), model),
                    InsufficientDetectionsError);
    const Quad far = axis_aligned_quad(5000.0, 0.0, 5050.0, 50.0);
    CHECK_THROWS_AS(predict_zone(frame_with(1, {fret(1, fret_box(1)), hand(far)}), model),
                    InsufficientDetectionsError);
}

TEST_CASE("predict_zone is invariant under uniform scaling") {
    const FretboardModel model;
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> x(0.0, 1300.0);
    for (int i = 0; i < 50; ++i) {
        const double x0 = x(rng);
        const Quad h = axis_aligned_quad(x0, 5.0, x0 + 90.0, 45.0);
        DetectionFrame frame{1, {}};
        for (int k = 0; k <= 12; ++k) frame.detections.push_back(fret(k, fret_box(k)));
        frame.detections.push_back(hand(h));
        ZonePrediction base;
        try {
            base = predict_zone(frame, model);
        } catch (const InsufficientDetectionsError&) {
            continue;
        }
        for (double s : {0.25, 3.0}) {
            DetectionFrame scaled = frame;
            for (auto& d : scaled.detections) d.quad = d.quad.scaled(s);
            const ZonePrediction z = predict_zone(scaled, model);
            CHECK(z.zone == base.zone);
            CHECK(z.fret_label == base.fret_label);
        }
    }
}

TEST_CASE("resolve_position") {
    FretboardModel model;
    model.num_zones = 3;
    const std::vector<FretPosition> e4{{1, 0}, {2, 5}, {3, 9}};

    ZonePrediction zone{1, 0.8, 0, 5};
    CHECK(resolve_position(e4, zone, model) == FretPosition{2, 5});

    const std::vector<FretPosition> single{{6, 0}};
    for (int z = 0; z < 3; ++z) {
        CHECK(resolve_position(single, {z, 0.5, 0, 0}, model) == FretPosition{6, 0});
    }

    // Zone 2 covers frets 8..12 and is centred at 10: |5 - 10| < |0 - 10|.
    const std::vector<FretPosition> two{{1, 0}, {2, 5}};
    CHECK(resolve_position(two, {2, 0.5, 0, 9}, model) == FretPosition{2, 5});

    CHECK_THROWS_AS(resolve_position(std::vector<FretPosition>{}, zone, model), UnplayableNoteError);
}

TEST_CASE("resolve_position prefers the lowest string among in-zone candidates") {
    FretboardModel model;
    model.num_zones = 1;
    const std::vector<FretPosition> c{{3, 9}, {2, 5}, {1, 0}};
    CHECK(resolve_position(c, {0, 0.5, 0, 0}, model) == FretPosition{1, 0});
}

TEST_CASE("resolve_position always returns a candidate") {
    const FretboardModel model;
    for (int midi = 40; midi <= 76; ++midi) {
        const auto c = candidate_positions(model, midi);
        for (int z = 0; z < model.num_zones; ++z) {
            const FretPosition p = resolve_position(c, {z, 0.5, 0, z}, model);
            CHECK(std::find(c.begin(), c.end(), p) != c.end());
        }
    }
}

TEST_CASE("fallback picks the lowest fret") {
    CHECK(fallback_position(std::vector<FretPosition>{{1, 0}, {2, 5}, {3, 9}}) == FretPosition{1, 0});
    CHECK(fallback_position(std::vector<FretPosition>{{2, 3}, {3, 7}}) == FretPosition{2, 3});
    CHECK_THROWS_AS(fallback_position(std::vector<FretPosition>{}), UnplayableNoteError);
}

TEST_CASE("transcribe: single note with detections") {
    const FretboardModel model;
    SynthSpec spec;
    spec.events = {{0.5, {2, 5}, 0.8}};
    const SynthPerformance perf = synth_performance(spec, model);
    const auto events = transcribe(perf.audio, perf.detections, model, AnalysisConfig{});
    REQUIRE(events.size() == 1);
    CHECK(std::abs(events[0].time_s - 0.5) <= 0.025);
    CHECK(events[0].string == 2);
    CHECK(events[0].fret == 5);
}

TEST_CASE("transcribe: silence gives an empty transcription") {
    const FretboardModel model;
    const SynthPerformance perf = synth_performance(SynthSpec{}, model);
    AudioBuffer silent;
    silent.samples = Eigen::ArrayXd::Zero(22050);
    const Transcription t = transcribe_detailed(silent, &perf.detections, 25.0, model, {});
    CHECK(t.empty());
    CHECK(t.notes.empty());
}

TEST_CASE("transcribe: missing detections fall back to the lowest fret") {
    const FretboardModel model;
    SynthSpec spec;
    spec.events = {{0.5, {2, 5}, 0.6}, {1.1, {3, 9}, 0.8}};
    const SynthPerformance perf = synth_performance(spec, model);

    const Transcription audio_only = transcribe_detailed(perf.audio, nullptr, 25.0, model, {});
    CHECK(audio_only.audio_only);
    REQUIRE(audio_only.notes.size() == 2);
    for (const auto& n : audio_only.notes) {
        CHECK(!n.zone);
        CHECK(n.position == FretPosition{1, 0});
        CHECK(n.event.note.name == "E4");
    }

    // Detections that stop after the first note: the second falls back.
    DetectionSet partial = perf.detections;
    std::erase_if(partial.frames, [](const DetectionFrame& f) { return f.index > 20; });
    const Transcription mixed = transcribe_detailed(perf.audio, &partial, 0.0, model, {});
    REQUIRE(mixed.notes.size() == 2);
    CHECK(mixed.notes[0].position == FretPosition{2, 5});
    CHECK(mixed.notes[1].position == FretPosition{1, 0});

    CHECK_THROWS_AS(transcribe_detailed(perf.audio, nullptr, 0.0, model, {}), ConfigError);
}

TEST_CASE("transcribe: non-default input rate is resampled") {
    const FretboardModel model;
    SynthSpec spec;
    spec.sample_rate = 44100;
    spec.events = {{0.5, {4, 2}, 0.8}};
    const SynthPerformance perf = synth_performance(spec, model);
    const auto events = transcribe(perf.audio, perf.detections, model, {});
    REQUIRE(events.size() == 1);
    CHECK(events[0].string == 4);
    CHECK(events[0].fret == 2);
}

TEST_CASE("transcribe: output sorted, at most one event per onset") {
    const FretboardModel model;
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 3; ++trial) {
        const SynthPerformance perf = synth_performance(oracle::random_melody(rng, 10), model);
        const Transcription t = transcribe_detailed(perf.audio, &perf.detections, 0.0, model, {});
        CHECK(t.notes.size() <= t.onset_count);
        const auto events = t.tab_events();
        CHECK(std::is_sorted(events.begin(), events.end(),
                             [](const TabEvent& a, const TabEvent& b) { return a.time_s < b.time_s; }));
        REQUIRE(events.size() == perf.tab.events.size());
        for (std::size_t i = 0; i < events.size(); ++i) {
            CHECK(std::abs(events[i].time_s - perf.tab.events[i].time_s) <= 0.025);
            CHECK(events[i].string == perf.tab.events[i].string);
            CHECK(events[i].fret == perf.tab.events[i].fret);
        }
    }
}
