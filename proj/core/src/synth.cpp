#include "paceloop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "paceloop/error.hpp"
#include "paceloop/rng.hpp"

namespace paceloop {

namespace {

constexpr double kGridS = 0.05;    // segmenter frame grid
constexpr int kSampleRate = 16000;
constexpr double kSwallowHalfWidthS = 0.1;

double quantize(double t) { return std::round(t / kGridS) * kGridS; }

// Burst durations, grid-aligned so segment bounds reproduce the truth
// interval exactly. All pass the 100-400 ms gate and keep the interval
// center within matching tolerance of the onset.
constexpr double kDurations[] = {0.15, 0.20, 0.25};

double pick_duration(std::mt19937& rng, double gap_to_next_s) {
    // Keep at least 0.20 s of silence before the next burst so the segmenter
    // (150 ms tolerance, 50 ms frames) always closes in between.
    double allowed[3];
    std::size_t count = 0;
    for (const double duration : kDurations) {
        if (duration <= gap_to_next_s - 0.20) {
            allowed[count++] = duration;
        }
    }
    if (count == 0) {
        return kDurations[0];
    }
    return allowed[uniform_index(rng, static_cast<std::uint32_t>(count))];
}

void render_chew(std::vector<float>& samples, std::mt19937& rng, double start_s,
                 double duration_s) {
    // Low-frequency dominant packet with a fast attack and gentle decay; the
    // gentle decay keeps every covered frame above the energy gate.
    static constexpr struct { double freq_hz, weight; } kPartials[] = {
        {130.0, 1.0}, {265.0, 0.6}, {520.0, 0.35}, {1150.0, 0.15}};
    constexpr double kWeightSum = 1.0 + 0.6 + 0.35 + 0.15;

    const double amplitude = uniform_range(rng, 0.45, 0.75);
    double phases[4];
    for (double& phase : phases) {
        phase = uniform_range(rng, 0.0, 2.0 * M_PI);
    }

    const auto begin = static_cast<std::size_t>(std::llround(start_s * kSampleRate));
    const auto length = static_cast<std::size_t>(std::llround(duration_s * kSampleRate));
    for (std::size_t i = 0; i < length && begin + i < samples.size(); ++i) {
        const double tau = static_cast<double>(i) / kSampleRate;
        const double envelope =
            std::min(tau / 0.012, 1.0) * std::exp(-1.5 * tau / duration_s);
        double value = 0.0;
        for (std::size_t p = 0; p < 4; ++p) {
            value += kPartials[p].weight *
                     std::sin(2.0 * M_PI * kPartials[p].freq_hz * tau + phases[p]);
        }
        samples[begin + i] += static_cast<float>(amplitude * envelope * value / kWeightSum);
    }
}

void render_artifact(std::vector<float>& samples, std::mt19937& rng, double start_s,
                     double duration_s) {
    // Broadband click: flat spectrum, sharp attack.
    const double amplitude = uniform_range(rng, 0.4, 0.7);
    const auto begin = static_cast<std::size_t>(std::llround(start_s * kSampleRate));
    const auto length = static_cast<std::size_t>(std::llround(duration_s * kSampleRate));
    for (std::size_t i = 0; i < length && begin + i < samples.size(); ++i) {
        const double tau = static_cast<double>(i) / kSampleRate;
        const double envelope =
            std::min(tau / 0.004, 1.0) * std::exp(-2.5 * tau / duration_s);
        samples[begin + i] +=
            static_cast<float>(amplitude * envelope * uniform_range(rng, -1.0, 1.0));
    }
}

void render_burst(std::vector<float>& samples, std::mt19937& rng,
                  BurstTemplate burst, double start_s, double duration_s) {
    if (burst == BurstTemplate::LowFreqChew) {
        render_chew(samples, rng, start_s, duration_s);
    } else {
        render_artifact(samples, rng, start_s, duration_s);
    }
}

}  // namespace

SynthMeal synth_meal(const SynthMealSpec& spec) {
    if (spec.duration_s <= 0.0 || spec.chew_gap_mean_s <= 0.0 ||
        spec.swallow_gap_mean_s <= 0.0 || spec.chews_per_swallow_mean <= 0.0) {
        fail("invalid-config", "synth spec means and duration must be positive");
    }

    std::mt19937 rng(spec.seed);
    SynthMeal meal;
    meal.samples.assign(
        static_cast<std::size_t>(std::llround(spec.duration_s * kSampleRate)), 0.0f);
    std::vector<AnnInterval> truth;

    const double cps_sd = std::max(1.0, 0.15 * spec.chews_per_swallow_mean);
    const double planting_end = spec.duration_s - 2.5;
    double t = quantize(1.5);
    bool room = t <= planting_end;

    while (room) {
        const int run_target = std::max(
            2, static_cast<int>(std::llround(normal(rng, spec.chews_per_swallow_mean, cps_sd))));
        int planted = 0;
        double last_chew = t;
        for (int i = 0; i < run_target && room; ++i) {
            const bool last_of_run = i + 1 == run_target;
            const double gap =
                last_of_run
                    ? spec.swallow_gap_mean_s + uniform_range(rng, -spec.swallow_gap_jitter_s,
                                                              spec.swallow_gap_jitter_s)
                    : spec.chew_gap_mean_s + uniform_range(rng, -spec.chew_gap_jitter_s,
                                                           spec.chew_gap_jitter_s);
            const double next = quantize(t + gap);
            const double duration = pick_duration(rng, next - t);
            render_burst(meal.samples, rng, spec.chew_template, t, duration);
            truth.push_back(AnnInterval{t, t + duration, AnnLabel::Chew});
            ++meal.planted_chews;
            ++planted;
            last_chew = t;
            t = next;
            room = t <= planting_end;
        }
        if (planted == 0) {
            break;
        }
        // Close the run with a swallow in the long gap after its last chew.
        const double midpoint = (last_chew + t) / 2.0;
        truth.push_back(AnnInterval{midpoint - kSwallowHalfWidthS,
                                    midpoint + kSwallowHalfWidthS, AnnLabel::Swallow});
        ++meal.planted_swallows;
        meal.run_lengths.push_back(planted);

        if (spec.artifact_rate > 0.0) {
            const double expected = spec.artifact_rate * static_cast<double>(planted);
            int extra = static_cast<int>(std::floor(expected + uniform01(rng)));
            extra = std::min(extra, 2);
            const double window_lo = last_chew + 0.45;
            const double window_hi = t - 0.45;
            for (int a = 0; a < extra; ++a) {
                const double fraction =
                    extra == 1 ? 0.5 : (a + 1) / (static_cast<double>(extra) + 1.0);
                const double center = window_lo + fraction * (window_hi - window_lo);
                if (center - 0.075 <= last_chew + 0.45 - 1e-9 ||
                    center + 0.075 >= t - 0.45 + 1e-9) {
                    continue;
                }
                const double start = quantize(center - 0.075);
                render_artifact(meal.samples, rng, start, 0.15);
                ++meal.planted_artifacts;
            }
        }
    }

    if (spec.noise_floor_db > -119.0) {
        const double rms = std::pow(10.0, spec.noise_floor_db / 20.0);
        const double amplitude = rms * std::sqrt(3.0);  // uniform noise RMS = a/sqrt(3)
        for (float& sample : meal.samples) {
            sample += static_cast<float>(uniform_range(rng, -amplitude, amplitude));
        }
    }

    for (float& sample : meal.samples) {
        sample = std::clamp(sample, -1.0f, 1.0f);
    }

    meal.truth = make_track(std::move(truth), "synthetic");
    return meal;
}

SynthMealSpec load_synth_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail("io-error", "cannot open synth spec '" + path + "'");
    }
    SynthMealSpec spec;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r\n");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail("parse-error", path + ":" + std::to_string(line_no) +
                                    ": expected key=value, got '" + line + "'");
        }
        const auto trim = [](std::string text) {
            const auto begin = text.find_first_not_of(" \t");
            if (begin == std::string::npos) {
                return std::string{};
            }
            const auto end = text.find_last_not_of(" \t");
            return text.substr(begin, end - begin + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "duration_s") {
                spec.duration_s = std::stod(value);
            } else if (key == "chew_gap_mean_s") {
                spec.chew_gap_mean_s = std::stod(value);
            } else if (key == "chew_gap_jitter_s") {
                spec.chew_gap_jitter_s = std::stod(value);
            } else if (key == "swallow_gap_mean_s") {
                spec.swallow_gap_mean_s = std::stod(value);
            } else if (key == "swallow_gap_jitter_s") {
                spec.swallow_gap_jitter_s = std::stod(value);
            } else if (key == "chews_per_swallow_mean") {
                spec.chews_per_swallow_mean = std::stod(value);
            } else if (key == "chew_template") {
                if (value == "low_freq_chew") {
                    spec.chew_template = BurstTemplate::LowFreqChew;
                } else if (value == "broadband_artifact") {
                    spec.chew_template = BurstTemplate::BroadbandArtifact;
                } else {
                    fail("parse-error", path + ":" + std::to_string(line_no) +
                                            ": unknown template '" + value + "'");
                }
            } else if (key == "artifact_rate") {
                spec.artifact_rate = std::stod(value);
            } else if (key == "noise_floor_db") {
                spec.noise_floor_db = std::stod(value);
            } else if (key == "seed") {
                spec.seed = static_cast<std::uint32_t>(std::stoul(value));
            } else {
                fail("parse-error", path + ":" + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail("parse-error", path + ":" + std::to_string(line_no) +
                                    ": bad value '" + value + "' for " + key);
        }
    }
    return spec;
}

}  // namespace paceloop
