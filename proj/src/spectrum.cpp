#include "tabsync/audio.hpp"
#include "tabsync/errors.hpp"
#include "tabsync/fft.hpp"

#include <algorithm>

namespace tabsync {

void AnalysisConfig::validate() const {
    if (sample_rate <= 0) {
        throw ConfigError("sample_rate must be positive");
    }
    if (!is_power_of_two(static_cast<std::size_t>(fft_size)) || fft_size < 4) {
        throw ConfigError("fft_size must be a power of two >= 4");
    }
    if (hop_size <= 0 || hop_size > fft_size) {
        throw ConfigError("hop_size must be in (0, fft_size]");
    }
    if (!(onset_threshold > 0.0) || !(onset_window_s > 0.0) || onset_min_gap_s < 0.0 ||
        onset_floor < 0.0 || onset_floor >= 1.0) {
        throw ConfigError("onset parameters out of range");
    }
    if (peak_count < 1) {
        throw ConfigError("peak_count must be >= 1");
    }
    if (!(min_hz >= 0.0) || !(max_hz > min_hz)) {
        throw ConfigError("pitch band must satisfy 0 <= min_hz < max_hz");
    }
    if (hps_stages < 1) {
        throw ConfigError("hps_stages must be >= 1");
    }
}

SpectralFrame spectral_frame_at(const AudioBuffer& audio, std::size_t start,
                                const AnalysisConfig& config) {
    const Eigen::Index n = config.fft_size;
    static thread_local Eigen::ArrayXd window;
    if (window.size() != n) {
        window = hann_window<double>(n);
    }

    Eigen::ArrayXd segment = Eigen::ArrayXd::Zero(n);
    const auto begin = static_cast<Eigen::Index>(start);
    if (begin < audio.size()) {
        const Eigen::Index count = std::min(n, audio.size() - begin);
        segment.head(count) = audio.samples.segment(begin, count);
    }
    segment *= window;

    const ComplexVector<double> spectrum = fft_real(segment);
    SpectralFrame frame;
    frame.start_sample = start;
    frame.magnitudes = spectrum.head(n / 2 + 1).array().abs();
    frame.bin_hz = static_cast<double>(audio.sample_rate) / static_cast<double>(n);
    return frame;
}

std::vector<SpectralFrame> magnitude_spectrum(const AudioBuffer& audio,
                                              const AnalysisConfig& config) {
    config.validate();
    if (audio.size() < config.fft_size) {
        throw InsufficientDataError("magnitude_spectrum: " + std::to_string(audio.size()) +
                                    " samples is shorter than one frame of " +
                                    std::to_string(config.fft_size));
    }
    const auto count =
        static_cast<std::size_t>((audio.size() - config.fft_size) / config.hop_size) + 1;
    std::vector<SpectralFrame> frames;
    frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        frames.push_back(spectral_frame_at(audio, i * static_cast<std::size_t>(config.hop_size), config));
    }
    return frames;
}

Eigen::ArrayXd spectral_flux(const std::vector<SpectralFrame>& frames) {
    Eigen::ArrayXd flux = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(frames.size()));
    for (std::size_t i = 1; i < frames.size(); ++i) {
        flux(static_cast<Eigen::Index>(i)) =
            (frames[i].magnitudes - frames[i - 1].magnitudes).max(0.0).sum();
    }
    return flux;
}

} // namespace tabsync
