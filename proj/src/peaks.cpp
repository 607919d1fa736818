#include "tabsync/audio.hpp"
#include "tabsync/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tabsync {

std::vector<PitchEstimate> top_peaks(const SpectralFrame& frame, int k, double min_hz,
                                     double max_hz) {
    if (k < 1) {
        throw DomainError("top_peaks: k must be >= 1");
    }
    const Eigen::ArrayXd& mag = frame.magnitudes;
    const Eigen::Index bins = mag.size();
    std::vector<PitchEstimate> peaks;
    if (bins < 3 || !(frame.bin_hz > 0.0)) {
        return peaks;
    }

    constexpr double kTiny = 1e-300;
    const double nyquist = frame.bin_hz * static_cast<double>(bins - 1);
    for (Eigen::Index i = 1; i + 1 < bins; ++i) {
        const double centre = mag(i);
        if (!(centre > 0.0) || centre <= mag(i - 1) || centre < mag(i + 1)) {
            continue;
        }
        const double a = std::log(std::max(mag(i - 1), kTiny));
        const double b = std::log(centre);
        const double c = std::log(std::max(mag(i + 1), kTiny));
        const double curvature = a - 2.0 * b + c;
        double offset = 0.0;
        if (curvature < 0.0) {
            offset = std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
        }
        const double freq = (static_cast<double>(i) + offset) * frame.bin_hz;
        if (freq < min_hz || freq > max_hz || !(freq > 0.0) || !(freq < nyquist)) {
            continue;
        }
        const double peak_log = b - 0.25 * (a - c) * offset;
        peaks.push_back({freq, std::exp(peak_log), 0});
    }

    std::sort(peaks.begin(), peaks.end(), [](const PitchEstimate& x, const PitchEstimate& y) {
        if (x.magnitude != y.magnitude) {
            return x.magnitude > y.magnitude;
        }
        return x.frequency_hz < y.frequency_hz;
    });
    if (peaks.size() > static_cast<std::size_t>(k)) {
        peaks.resize(static_cast<std::size_t>(k));
    }
    for (std::size_t r = 0; r < peaks.size(); ++r) {
        peaks[r].rank = static_cast<int>(r) + 1;
    }
    return peaks;
}

SpectralFrame harmonic_product_spectrum(const SpectralFrame& frame, int stages) {
    if (stages < 1) {
        throw DomainError("harmonic_product_spectrum: stages must be >= 1");
    }
    SpectralFrame out = frame;
    const Eigen::Index bins = frame.magnitudes.size();
    for (int factor = 2; factor <= stages + 1; ++factor) {
        for (Eigen::Index i = 0; i < bins; ++i) {
            const Eigen::Index src = i * factor;
            out.magnitudes(i) *= src < bins ? frame.magnitudes(src) : 0.0;
        }
    }
    return out;
}

std::vector<PitchEstimate> pitches_at(const AudioBuffer& audio, double onset_time_s,
                                      const AnalysisConfig& config) {
    config.validate();
    const double start = std::max(0.0, std::round(onset_time_s * audio.sample_rate));
    SpectralFrame frame = spectral_frame_at(audio, static_cast<std::size_t>(start), config);
    if (config.use_hps) {
        frame = harmonic_product_spectrum(frame, config.hps_stages);
    }
    return top_peaks(frame, config.peak_count, config.min_hz, config.max_hz);
}

} // namespace tabsync
