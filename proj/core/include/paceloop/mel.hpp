#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "paceloop/config.hpp"

namespace paceloop {

inline constexpr std::size_t kMelBins = 128;
inline constexpr double kMelWindowMs = 25.0;
inline constexpr double kMelStrideMs = 10.0;
inline constexpr std::size_t kFftSize = 512;
inline constexpr double kMelEnergyFloor = 1e-10;

// HTK mel mapping.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// 128 triangular filters (peak 1) spaced evenly on the HTK mel scale from
// 0 Hz to Nyquist, sampled on the FFT bin grid.
class MelFilterbank {
public:
    MelFilterbank(std::size_t bins, std::size_t fft_size, double sample_rate_hz);

    std::size_t bins() const { return centers_hz_.size(); }
    double center_hz(std::size_t bin) const { return centers_hz_[bin]; }

    // power: one-sided spectrum (fft_size/2 + 1 values); out: bins() energies.
    void apply(std::span<const double> power, double* out) const;

private:
    struct Filter {
        std::size_t first_bin = 0;
        std::vector<double> weights;
    };
    std::vector<Filter> filters_;
    std::vector<double> centers_hz_;
};

// Natural-log mel energies, row-major [frame][bin]; 38 x 128 for a 400 ms
// clip at 16 kHz (25 ms Hann window, 10 ms stride, 512-point FFT).
struct MelSpectrogram {
    std::size_t frames = 0;
    std::size_t bins = 0;
    std::vector<double> values;

    double at(std::size_t frame, std::size_t bin) const {
        return values[frame * bins + bin];
    }
};

// Throws Error("wrong-clip-length") unless the clip is exactly clip_len_ms.
MelSpectrogram log_mel(std::span<const float> clip, const SessionConfig& config);

// Periodic Hann window of the given length.
std::vector<double> hann_window(std::size_t length);

}  // namespace paceloop
