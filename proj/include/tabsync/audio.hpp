#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tabsync {

/// Mono audio, samples in [-1, 1].
struct AudioBuffer {
    Eigen::ArrayXd samples;
    int sample_rate = 22050;

    Eigen::Index size() const noexcept { return samples.size(); }
    double duration_s() const noexcept {
        return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
    }
};

/// Short-time analysis parameters. Every constant the onset picker and peak
/// picker use lives here so the CLI can expose it as a flag.
struct AnalysisConfig {
    int sample_rate = 22050;     // pipeline rate; input is resampled to this
    int fft_size = 2048;
    int hop_size = 512;

    double onset_threshold = 1.5;  // flux must exceed this times the trailing mean
    double onset_window_s = 0.1;   // trailing-mean length
    double onset_min_gap_s = 0.05;
    double onset_floor = 0.05;     // fraction of the largest flux in the signal

    int peak_count = 3;
    double min_hz = 70.0;
    double max_hz = 1400.0;

    bool use_hps = false;
    int hps_stages = 3;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct SpectralFrame {
    std::size_t start_sample = 0;
    Eigen::ArrayXd magnitudes;  // fft_size/2 + 1 bins
    double bin_hz = 0.0;
};

struct OnsetEvent {
    double time_s = 0.0;
    double strength = 0.0;
};

struct PitchEstimate {
    double frequency_hz = 0.0;
    double magnitude = 0.0;
    int rank = 0;  // 1-based
};

// WAV I/O ----------------------------------------------------------------

/// Decode a RIFF/WAVE file held in memory. Integer PCM (16/24 bit) and
/// 32-bit float are accepted, including WAVE_FORMAT_EXTENSIBLE wrappers.
/// Channels are averaged to mono; the header's sample rate is kept.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);

/// 16-bit PCM mono WAV. Samples outside [-1, 1] are clipped.
std::vector<std::uint8_t> encode_wav_pcm16(const AudioBuffer& audio);

AudioBuffer read_wav_file(const std::string& path);
void write_wav_file(const std::string& path, const AudioBuffer& audio);

/// Linear-interpolation resampler. Returns the input unchanged when the
/// rates already match.
AudioBuffer resample_linear(const AudioBuffer& audio, int target_rate);

// Spectral analysis ------------------------------------------------------

/// Hann-windowed magnitude spectrum of the fft_size samples starting at
/// `start`; samples past the end of the buffer are treated as zero.
SpectralFrame spectral_frame_at(const AudioBuffer& audio, std::size_t start,
                                const AnalysisConfig& config);

/// Frames at hop_size stride; count = floor((len - fft_size) / hop) + 1.
std::vector<SpectralFrame> magnitude_spectrum(const AudioBuffer& audio,
                                              const AnalysisConfig& config);

/// Half-wave-rectified spectral flux onset picker.
std::vector<OnsetEvent> detect_onsets(const AudioBuffer& audio, const AnalysisConfig& config);

/// Spectral flux per frame; element 0 is always zero.
Eigen::ArrayXd spectral_flux(const std::vector<SpectralFrame>& frames);

/// Up to k local maxima in descending magnitude order, refined by a
/// parabola through the log magnitudes of the three bins around each
/// maximum. Peaks outside [min_hz, max_hz] are dropped.
std::vector<PitchEstimate> top_peaks(const SpectralFrame& frame, int k,
                                     double min_hz = 70.0, double max_hz = 1400.0);

/// Product of the magnitude spectrum with `stages` copies of itself
/// downsampled by 2, 3, ..., stages + 1.
SpectralFrame harmonic_product_spectrum(const SpectralFrame& frame, int stages);

/// Ranked pitch candidates for the note starting at `onset_time_s`, taken
/// from the analysis frame whose start is nearest the onset.
std::vector<PitchEstimate> pitches_at(const AudioBuffer& audio, double onset_time_s,
                                      const AnalysisConfig& config);

} // namespace tabsync
