#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tabsync/audio.hpp"
#include "tabsync/fretboard.hpp"
#include "tabsync/fusion.hpp"

namespace tabsync::cli {

enum ExitCode : int {
    kSuccess = 0,
    kIoFailure = 1,
    kInvalidInput = 2,
    kNoOnsets = 3,
};

enum class OutputFormat { Ascii, Events };

struct RunConfig {
    std::string audio_path;
    std::optional<std::string> detections_path;
    std::optional<double> fps;
    Tuning tuning;
    int max_frets = 12;
    int num_zones = 12;
    double reference_hz = 440.0;
    AnalysisConfig analysis;
    FusionConfig fusion;
    double columns_per_second = 4.0;
    OutputFormat format = OutputFormat::Ascii;
    std::optional<std::string> out_path;
};

/// Transcribe subcommand body. Writes the analysis table to `out`, the tab
/// to out_path (or `out` when unset) and diagnostics to `err`.
int run_transcribe(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Entry point shared by the executable and the tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tabsync::cli
