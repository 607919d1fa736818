#include "tabsync/audio.hpp"

#include <algorithm>
#include <cmath>

namespace tabsync {

std::vector<OnsetEvent> detect_onsets(const AudioBuffer& audio, const AnalysisConfig& config) {
    config.validate();
    if (audio.size() < config.fft_size) {
        return {};
    }
    const auto frames = magnitude_spectrum(audio, config);
    const Eigen::ArrayXd flux = spectral_flux(frames);
    const Eigen::Index count = flux.size();
    const double peak = flux.maxCoeff();
    if (!(peak > 0.0)) {
        return {};
    }

    const double sr = audio.sample_rate;
    const double hop = config.hop_size;
    const auto trailing = std::max<Eigen::Index>(
        1, std::lround(config.onset_window_s * sr / hop));
    const double floor = config.onset_floor * peak;

    std::vector<OnsetEvent> events;
    for (Eigen::Index i = 1; i + 1 < count; ++i) {
        const double value = flux(i);
        if (!(value > floor) || value < flux(i - 1) || value <= flux(i + 1)) {
            continue;
        }
        const Eigen::Index from = std::max<Eigen::Index>(0, i - trailing);
        const double mean = flux.segment(from, i - from).mean();
        if (!(value > config.onset_threshold * mean)) {
            continue;
        }
        // Frame centre, snapped to the hop grid.
        const double centre = static_cast<double>(i) * hop + config.fft_size / 2.0;
        const double time = std::round(centre / hop) * hop / sr;
        if (!events.empty() && time - events.back().time_s < config.onset_min_gap_s) {
            continue;
        }
        events.push_back({time, value});
    }
    return events;
}

} // namespace tabsync
