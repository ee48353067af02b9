#include "paceloop/mel.hpp"

#include <cmath>
#include <string>

#include "paceloop/error.hpp"
#include "paceloop/fft.hpp"

namespace paceloop {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(std::size_t bins, std::size_t fft_size,
                             double sample_rate_hz) {
    const double nyquist = sample_rate_hz / 2.0;
    const double mel_max = hz_to_mel(nyquist);
    const double bin_width = sample_rate_hz / static_cast<double>(fft_size);
    const std::size_t spectrum_bins = fft_size / 2 + 1;

    // bins + 2 edge points, evenly spaced in mel.
    std::vector<double> edges_hz(bins + 2);
    for (std::size_t i = 0; i < edges_hz.size(); ++i) {
        edges_hz[i] = mel_to_hz(mel_max * static_cast<double>(i) /
                                static_cast<double>(bins + 1));
    }

    filters_.resize(bins);
    centers_hz_.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double lower = edges_hz[b];
        const double center = edges_hz[b + 1];
        const double upper = edges_hz[b + 2];
        centers_hz_[b] = center;

        Filter filter;
        bool started = false;
        for (std::size_t k = 0; k < spectrum_bins; ++k) {
            const double freq = static_cast<double>(k) * bin_width;
            double weight = 0.0;
            if (freq > lower && freq < center) {
                weight = (freq - lower) / (center - lower);
            } else if (freq >= center && freq < upper) {
                weight = (upper - freq) / (upper - center);
            }
            if (weight > 0.0) {
                if (!started) {
                    filter.first_bin = k;
                    started = true;
                }
                filter.weights.push_back(weight);
            } else if (started) {
                break;
            }
        }
        filters_[b] = std::move(filter);
    }
}

void MelFilterbank::apply(std::span<const double> power, double* out) const {
    for (std::size_t b = 0; b < filters_.size(); ++b) {
        const Filter& filter = filters_[b];
        double sum = 0.0;
        for (std::size_t i = 0; i < filter.weights.size(); ++i) {
            sum += filter.weights[i] * power[filter.first_bin + i];
        }
        out[b] = sum;
    }
}

std::vector<double> hann_window(std::size_t length) {
    std::vector<double> window(length);
    for (std::size_t n = 0; n < length; ++n) {
        window[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(n) /
                                         static_cast<double>(length));
    }
    return window;
}

MelSpectrogram log_mel(std::span<const float> clip, const SessionConfig& config) {
    const auto expected = static_cast<std::size_t>(config.clip_len_samples());
    if (clip.size() != expected) {
        fail("wrong-clip-length", "clip has " + std::to_string(clip.size()) +
                                      " samples, expected " + std::to_string(expected));
    }

    const double rate = static_cast<double>(config.sample_rate_hz);
    const auto window_len = static_cast<std::size_t>(rate * kMelWindowMs / 1000.0 + 0.5);
    const auto stride = static_cast<std::size_t>(rate * kMelStrideMs / 1000.0 + 0.5);
    const std::size_t frames = (clip.size() - window_len) / stride + 1;

    static const MelFilterbank filterbank(kMelBins, kFftSize, 16000.0);
    static const std::vector<double> window = hann_window(window_len);

    MelSpectrogram mel;
    mel.frames = frames;
    mel.bins = kMelBins;
    mel.values.resize(frames * kMelBins);

    std::vector<double> frame(window_len);
    for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t start = f * stride;
        for (std::size_t n = 0; n < window_len; ++n) {
            frame[n] = static_cast<double>(clip[start + n]) * window[n];
        }
        const std::vector<double> power = power_spectrum(frame, kFftSize);
        double* row = mel.values.data() + f * kMelBins;
        filterbank.apply(power, row);
        for (std::size_t b = 0; b < kMelBins; ++b) {
            row[b] = std::log(std::max(row[b], kMelEnergyFloor));
        }
    }
    return mel;
}

}  // namespace paceloop
