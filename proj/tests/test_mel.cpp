#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "paceloop/fft.hpp"
#include "paceloop/mel.hpp"
#include "paceloop/rng.hpp"

using namespace paceloop;

namespace {

const SessionConfig kConfig;

std::vector<float> random_clip(std::uint32_t seed, float amplitude = 0.8f) {
    std::mt19937 rng(seed);
    std::vector<float> clip(6400);
    for (float& sample : clip) {
        sample = static_cast<float>(uniform_range(rng, -amplitude, amplitude));
    }
    return clip;
}

}  // namespace

TEST_CASE("log-mel output is 38 x 128 for every valid clip") {
    for (const std::uint32_t seed : {1u, 2u, 3u}) {
        const auto mel = log_mel(random_clip(seed), kConfig);
        CHECK(mel.frames == 38);
        CHECK(mel.bins == 128);
        CHECK(mel.values.size() == 38 * 128);
    }
    const std::vector<float> sine = [] {
        std::vector<float> clip(6400);
        for (std::size_t i = 0; i < clip.size(); ++i) {
            clip[i] = 0.7f * std::sin(2.0 * M_PI * 440.0 * i / 16000.0);
        }
        return clip;
    }();
    CHECK(log_mel(sine, kConfig).frames == 38);
}

TEST_CASE("wrong clip length is rejected") {
    CHECK_THROWS(log_mel(std::vector<float>(6000, 0.1f), kConfig));
}

TEST_CASE("all-zero clip sits at the uniform floor") {
    const auto mel = log_mel(std::vector<float>(6400, 0.0f), kConfig);
    const double floor = std::log(1e-10);
    for (const double value : mel.values) {
        REQUIRE(value == floor);
    }
}

TEST_CASE("every cell respects the energy floor") {
    const auto mel = log_mel(random_clip(9), kConfig);
    for (const double value : mel.values) {
        REQUIRE(value >= std::log(1e-10));
    }
}

TEST_CASE("1 kHz sine peaks at the filter whose center is nearest 1 kHz") {
    // Independent center computation straight from the HTK mapping.
    const double mel_max = 2595.0 * std::log10(1.0 + 8000.0 / 700.0);
    int nearest = -1;
    double best = 1e9;
    for (int b = 0; b < 128; ++b) {
        const double center_mel = mel_max * (b + 1) / 129.0;
        const double center_hz = 700.0 * (std::pow(10.0, center_mel / 2595.0) - 1.0);
        if (std::abs(center_hz - 1000.0) < best) {
            best = std::abs(center_hz - 1000.0);
            nearest = b;
        }
    }

    std::vector<float> clip(6400);
    for (std::size_t i = 0; i < clip.size(); ++i) {
        clip[i] = 0.8f * static_cast<float>(std::sin(2.0 * M_PI * 1000.0 * i / 16000.0));
    }
    const auto mel = log_mel(clip, kConfig);
    for (std::size_t frame = 0; frame < mel.frames; ++frame) {
        int argmax = 0;
        double top = mel.at(frame, 0);
        for (int b = 1; b < 128; ++b) {
            if (mel.at(frame, b) > top) {
                top = mel.at(frame, b);
                argmax = b;
            }
        }
        REQUIRE(argmax == nearest);
    }
}

TEST_CASE("windowed-frame power spectrum satisfies Parseval") {
    std::mt19937 rng(77);
    const std::vector<double> window = hann_window(400);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> frame(400);
        double time_energy = 0.0;
        for (std::size_t i = 0; i < frame.size(); ++i) {
            frame[i] = uniform_range(rng, -1.0, 1.0) * window[i];
            time_energy += frame[i] * frame[i];
        }
        const auto power = power_spectrum(frame, 512);
        double spectrum_energy = power[0] + power[256];
        for (std::size_t k = 1; k < 256; ++k) {
            spectrum_energy += 2.0 * power[k];
        }
        spectrum_energy /= 512.0;
        REQUIRE(std::abs(spectrum_energy - time_energy) <=
                1e-6 * std::max(time_energy, 1e-30));
    }
}

TEST_CASE("log-mel is monotone under clip attenuation") {
    const auto clip = random_clip(5, 0.9f);
    std::vector<float> half = clip;
    for (float& sample : half) {
        sample *= 0.5f;
    }
    const auto full_mel = log_mel(clip, kConfig);
    const auto half_mel = log_mel(half, kConfig);
    const double floor = std::log(1e-10);
    for (std::size_t i = 0; i < full_mel.values.size(); ++i) {
        REQUIRE((half_mel.values[i] < full_mel.values[i] ||
                 half_mel.values[i] == floor));
    }
}

TEST_CASE("mel scale helpers invert each other") {
    for (const double hz : {0.0, 440.0, 1000.0, 4000.0, 8000.0}) {
        CHECK(mel_to_hz(hz_to_mel(hz)) == doctest::Approx(hz).epsilon(1e-9));
    }
    CHECK(hz_to_mel(1000.0) == doctest::Approx(999.79).epsilon(1e-3));
}

TEST_CASE("fft rejects non-power-of-two sizes") {
    std::vector<std::complex<double>> data(300);
    CHECK_THROWS(fft_radix2(data));
}
