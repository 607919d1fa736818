#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ios>
#include <sstream>

#include <CLI11.hpp>

#include "tabsync/detections.hpp"
#include "tabsync/errors.hpp"
#include "tabsync/synth.hpp"
#include "tabsync/tab.hpp"

namespace tabsync::cli {

namespace {

std::string format_top_notes(const std::vector<PitchEstimate>& pitches, double reference_hz) {
    std::string out = "[";
    for (std::size_t i = 0; i < pitches.size(); ++i) {
        char buf[64];
        const NotePitch note = freq_to_note(pitches[i].frequency_hz, reference_hz);
        std::snprintf(buf, sizeof buf, "%s[%.1f, '%s']", i ? ", " : "", pitches[i].frequency_hz,
                      note.name.c_str());
        out += buf;
    }
    return out + "]";
}

void print_table_header(std::ostream& out, bool with_position) {
    out << "frame  onset_s    top_notes";
    if (with_position) {
        out << "  ->  position";
    }
    out << "\n";
}

void print_row(std::ostream& out, const NoteEvent& event, double reference_hz,
               const std::string& position) {
    char head[64];
    std::snprintf(head, sizeof head, "%-6d %-10.7f ", event.frame_index, event.onset.time_s);
    out << head << format_top_notes(event.pitches, reference_hz);
    if (!position.empty()) {
        out << "  ->  " << position;
    }
    out << "\n";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::ios_base::failure("cannot write " + path);
    }
    file << text;
    if (!file) {
        throw std::ios_base::failure("write failed for " + path);
    }
}

std::string read_text(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw std::ios_base::failure("cannot open " + path);
    }
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

FretboardModel make_model(const RunConfig& config) {
    FretboardModel model;
    model.tuning = config.tuning;
    model.max_frets = config.max_frets;
    model.num_zones = config.num_zones;
    model.reference_hz = config.reference_hz;
    model.validate();
    return model;
}

struct TuningFlags {
    std::string text;
    std::string order = "low-to-high";

    Tuning resolve() const {
        if (text.empty()) {
            return Tuning::standard();
        }
        return parse_tuning(text, order == "high-to-low" ? TuningOrder::HighToLow
                                                         : TuningOrder::LowToHigh);
    }
};

void add_analysis_flags(CLI::App& cmd, AnalysisConfig& a) {
    cmd.add_option("--fft-size", a.fft_size, "FFT length (power of two)")->capture_default_str();
    cmd.add_option("--hop", a.hop_size, "hop size in samples")->capture_default_str();
    cmd.add_option("--sample-rate", a.sample_rate, "analysis sample rate (input is resampled)")
        ->capture_default_str();
    cmd.add_option("--onset-threshold", a.onset_threshold,
                   "flux must exceed this multiple of the trailing mean")
        ->capture_default_str();
    cmd.add_option("--onset-window", a.onset_window_s, "trailing mean length, seconds")
        ->capture_default_str();
    cmd.add_option("--onset-gap", a.onset_min_gap_s, "minimum inter-onset gap, seconds")
        ->capture_default_str();
    cmd.add_option("--onset-floor", a.onset_floor, "absolute floor as a fraction of peak flux")
        ->capture_default_str();
    cmd.add_option("--peaks", a.peak_count, "pitch candidates per onset")->capture_default_str();
    cmd.add_option("--min-hz", a.min_hz, "lowest accepted peak frequency")->capture_default_str();
    cmd.add_option("--max-hz", a.max_hz, "highest accepted peak frequency")->capture_default_str();
    cmd.add_flag("--hps", a.use_hps, "pick peaks on the harmonic product spectrum");
    cmd.add_option("--hps-stages", a.hps_stages, "HPS downsampling stages")->capture_default_str();
}

void add_fretboard_flags(CLI::App& cmd, RunConfig& config, TuningFlags& tuning) {
    cmd.add_option("--tuning", tuning.text, "six note names, e.g. E2A2D3G3B3E4");
    cmd.add_option("--tuning-order", tuning.order, "order of --tuning names")
        ->check(CLI::IsMember({"low-to-high", "high-to-low"}))
        ->capture_default_str();
    cmd.add_option("--max-fret", config.max_frets, "highest playable fret")->capture_default_str();
    cmd.add_option("--num-zones", config.num_zones, "fret zones")->capture_default_str();
    cmd.add_option("--reference-hz", config.reference_hz, "A4 reference pitch")
        ->capture_default_str();
}

int run_analyze(const RunConfig& config, double fps, std::ostream& out, std::ostream& err) {
    config.analysis.validate();
    const AudioBuffer audio = resample_linear(read_wav_file(config.audio_path),
                                              config.analysis.sample_rate);
    const auto onsets = detect_onsets(audio, config.analysis);
    if (onsets.empty()) {
        err << "no onsets detected\n";
        return kNoOnsets;
    }
    print_table_header(out, false);
    for (const auto& onset : onsets) {
        NoteEvent event;
        event.onset = onset;
        event.pitches = pitches_at(audio, onset.time_s, config.analysis);
        event.frame_index = onset_to_frame(onset.time_s, fps);
        print_row(out, event, config.reference_hz, "");
    }
    return kSuccess;
}

struct SynthFlags {
    std::string events_path;
    std::string audio_out;
    std::optional<std::string> detections_out;
    std::optional<std::string> tab_out;
    double fps = 25.0;
    double max_duration = 0.8;
    SynthSpec spec;
};

int run_synth(const RunConfig& config, const SynthFlags& flags, std::ostream& out) {
    const FretboardModel model = make_model(config);
    const TabDocument source = parse_events(read_text(flags.events_path));

    SynthSpec spec = flags.spec;
    spec.events.clear();
    std::vector<TabEvent> events = source.events;
    std::stable_sort(events.begin(), events.end(),
                     [](const TabEvent& a, const TabEvent& b) { return a.time_s < b.time_s; });
    for (std::size_t i = 0; i < events.size(); ++i) {
        double duration = flags.max_duration;
        if (i + 1 < events.size()) {
            duration = std::min(duration, events[i + 1].time_s - events[i].time_s);
        }
        spec.events.push_back({events[i].time_s, {events[i].string, events[i].fret}, duration});
    }

    DetectionLayout layout;
    layout.video.fps = flags.fps;
    const SynthPerformance perf = synth_performance(spec, model, layout);
    write_wav_file(flags.audio_out, perf.audio);
    if (flags.detections_out) {
        write_text(*flags.detections_out, serialize_detection_file(perf.detections));
    }
    if (flags.tab_out) {
        TabDocument doc = perf.tab;
        doc.columns_per_second = config.columns_per_second;
        write_text(*flags.tab_out, render_ascii(doc).text);
    }
    out << "synthesized " << perf.tab.events.size() << " notes, " << perf.audio.size()
        << " samples at " << perf.audio.sample_rate << " Hz\n";
    return kSuccess;
}

} // namespace

int run_transcribe(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const FretboardModel model = make_model(config);
    config.analysis.validate();

    const AudioBuffer audio = read_wav_file(config.audio_path);
    std::optional<DetectionSet> detections;
    if (config.detections_path) {
        detections = read_detection_file(*config.detections_path, model.max_frets);
    }
    if (!config.fps && !detections) {
        throw ConfigError("no frame rate: pass --detections or --fps");
    }
    const double fps = config.fps ? *config.fps : detections->video.fps;
    if (!(fps > 0.0)) {
        throw ConfigError("--fps must be positive");
    }

    const Transcription result = transcribe_detailed(
        audio, detections ? &*detections : nullptr, fps, model, config.analysis, config.fusion);
    if (result.empty()) {
        err << "no onsets detected\n";
        return kNoOnsets;
    }

    if (result.audio_only) {
        out << "# audio-only: no detections, positions use the lowest-fret fallback\n";
    }
    print_table_header(out, true);
    for (const auto& note : result.notes) {
        std::string position = "s" + std::to_string(note.position.string) + " f" +
                               std::to_string(note.position.fret);
        if (note.zone) {
            char buf[48];
            std::snprintf(buf, sizeof buf, " (zone %d, iou %.3f)", note.zone->zone, note.zone->score);
            position += buf;
        } else {
            position += " (fallback)";
        }
        print_row(out, note.event, model.reference_hz, position);
    }

    TabDocument doc;
    doc.events = result.tab_events();
    doc.tuning = model.tuning;
    doc.columns_per_second = config.columns_per_second;

    std::string artifact;
    if (config.format == OutputFormat::Events) {
        artifact = export_events(doc) + "\n";
    } else {
        const RenderedTab tab = render_ascii(doc);
        for (const auto& w : tab.warnings) {
            err << "warning: " << w << "\n";
        }
        artifact = tab.text;
    }
    if (config.out_path) {
        write_text(*config.out_path, artifact);
    } else {
        out << artifact;
    }
    return kSuccess;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Guitar tablature from audio onsets and fretboard detections", "tabsync"};
    app.require_subcommand(1);

    RunConfig config;
    TuningFlags tuning;
    std::string format = "ascii";
    std::string out_path;
    std::string detections_path;
    double fps_override = 0.0;

    auto* transcribe = app.add_subcommand("transcribe", "audio + detections to tablature");
    transcribe->add_option("--audio", config.audio_path, "input WAV")->required();
    transcribe->add_option("--detections", detections_path, "detection interchange JSON");
    transcribe->add_option("--fps", fps_override, "video frame rate (overrides the detection file)");
    add_fretboard_flags(*transcribe, config, tuning);
    add_analysis_flags(*transcribe, config.analysis);
    transcribe->add_option("--search-radius", config.fusion.search_radius,
                           "frames searched around each onset for a hand detection")
        ->capture_default_str();
    transcribe->add_option("--columns-per-second", config.columns_per_second,
                           "ASCII tab layout density")
        ->capture_default_str();
    transcribe->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"ascii", "events"}))
        ->capture_default_str();
    transcribe->add_option("--out", out_path, "output path (default: stdout)");

    double analyze_fps = 25.0;
    auto* analyze = app.add_subcommand("analyze-audio", "onset and pitch table for a WAV file");
    analyze->add_option("--audio", config.audio_path, "input WAV")->required();
    analyze->add_option("--fps", analyze_fps, "frame rate for the frame column")
        ->capture_default_str();
    analyze->add_option("--reference-hz", config.reference_hz, "A4 reference pitch")
        ->capture_default_str();
    add_analysis_flags(*analyze, config.analysis);

    SynthFlags synth_flags;
    auto* synth = app.add_subcommand("synth", "render a tab event file to WAV + detections");
    synth->add_option("--events", synth_flags.events_path, "tab event JSON (export format)")
        ->required();
    synth->add_option("--audio-out", synth_flags.audio_out, "output WAV")->required();
    synth->add_option("--detections-out", synth_flags.detections_out, "output detection JSON");
    synth->add_option("--tab-out", synth_flags.tab_out, "ground-truth ASCII tab");
    synth->add_option("--fps", synth_flags.fps, "video frame rate")->capture_default_str();
    synth->add_option("--max-duration", synth_flags.max_duration, "longest note, seconds")
        ->capture_default_str();
    synth->add_option("--harmonics", synth_flags.spec.harmonics, "partials per note")
        ->capture_default_str();
    synth->add_option("--sample-rate", synth_flags.spec.sample_rate, "output sample rate")
        ->capture_default_str();
    synth->add_option("--columns-per-second", config.columns_per_second, "tab layout density")
        ->capture_default_str();
    add_fretboard_flags(*synth, config, tuning);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInvalidInput;
    }

    try {
        config.tuning = tuning.resolve();
        if (*transcribe) {
            if (!detections_path.empty()) {
                config.detections_path = detections_path;
            }
            if (fps_override > 0.0) {
                config.fps = fps_override;
            } else if (transcribe->count("--fps") > 0) {
                throw ConfigError("--fps must be positive");
            }
            if (!out_path.empty()) {
                config.out_path = out_path;
            }
            config.format = format == "events" ? OutputFormat::Events : OutputFormat::Ascii;
            return run_transcribe(config, out, err);
        }
        if (*analyze) {
            if (!(analyze_fps > 0.0)) {
                throw ConfigError("--fps must be positive");
            }
            return run_analyze(config, analyze_fps, out, err);
        }
        return run_synth(config, synth_flags, out);
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
}

} // namespace tabsync::cli
