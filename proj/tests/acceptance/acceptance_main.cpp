// Acceptance suite: run every gate at its pinned threshold and print one
// PASS/FAIL line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "paceloop/engine.hpp"
#include "paceloop/evaluation.hpp"
#include "paceloop/fft.hpp"
#include "paceloop/intervention.hpp"
#include "paceloop/mel.hpp"
#include "paceloop/pace.hpp"
#include "paceloop/rng.hpp"
#include "paceloop/synth.hpp"

using namespace paceloop;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str());
    if (!pass) {
        ++g_failures;
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. swallow-inference oracle equivalence

void criterion_pace_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const SessionConfig config;
    std::mt19937 rng(20240801);
    long mismatches = 0;
    long sequences = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int count = 1 + static_cast<int>(uniform_index(rng, 500));
        std::vector<double> chews;
        chews.reserve(count);
        double t = uniform_range(rng, 0.0, 3.0);
        for (int i = 0; i < count; ++i) {
            chews.push_back(t);
            const bool long_gap = uniform01(rng) < 0.25;
            t += long_gap ? std::max(0.05, normal(rng, 1.919, 0.4))
                          : std::max(0.05, normal(rng, 0.424, 0.1));
        }

        PaceTracker tracker(config);
        std::vector<double> streamed_swallows;
        for (const double chew : chews) {
            const auto step = tracker.on_chew(chew);
            if (step.swallow) {
                streamed_swallows.push_back(step.swallow->time_s);
            }
        }
        const auto final_step = tracker.finalize(chews.back());
        if (final_step.swallow) {
            streamed_swallows.push_back(final_step.swallow->time_s);
        }

        const auto oracle = oracles::brute_force_pace(chews, config);
        bool equal = streamed_swallows.size() == oracle.swallow_times_s.size() &&
                     tracker.state().interval_cps == oracle.interval_cps;
        if (equal) {
            for (std::size_t i = 0; i < streamed_swallows.size(); ++i) {
                if (streamed_swallows[i] != oracle.swallow_times_s[i]) {
                    equal = false;
                    break;
                }
            }
        }
        if (!equal) {
            ++mismatches;
        }
        ++sequences;
    }
    const double elapsed = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "%ld sequences, %ld mismatches, %.2f s",
                  sequences, mismatches, elapsed);
    report(1, "streaming swallow inference equals brute force",
           mismatches == 0 && elapsed < 10.0, detail);
}

// ---------------------------------------------------------------------------
// 2. segmenter streaming equivalence on synthetic meals

void criterion_segmenter_equivalence() {
    const SessionConfig config;
    long mismatches = 0;
    for (std::uint32_t seed = 1; seed <= 100; ++seed) {
        SynthMealSpec spec;
        spec.seed = seed;
        spec.duration_s = 30.0 + (seed % 7) * 10.0;
        spec.chews_per_swallow_mean = 6.0 + (seed % 9) * 2.0;
        if (seed % 3 == 0) {
            spec.noise_floor_db = -55.0;
        }
        if (seed % 4 == 0) {
            spec.artifact_rate = 0.15;
        }
        const SynthMeal meal = synth_meal(spec);
        const auto levels = frame_levels(meal.samples, config);

        Segmenter segmenter(config);
        std::vector<SegmentBounds> streamed;
        for (const auto& frame : levels) {
            if (const auto bounds = segmenter.step(frame)) {
                streamed.push_back(*bounds);
            }
        }
        if (const auto bounds = segmenter.flush()) {
            streamed.push_back(*bounds);
        }

        const auto offline = oracles::offline_segments(levels, config);
        bool equal = streamed.size() == offline.size();
        if (equal) {
            for (std::size_t i = 0; i < streamed.size(); ++i) {
                if (streamed[i].start_s != offline[i].start_s ||
                    streamed[i].end_s != offline[i].end_s) {
                    equal = false;
                    break;
                }
            }
        }
        if (!equal) {
            ++mismatches;
        }
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail), "100 meals, %ld mismatches", mismatches);
    report(2, "frame-by-frame segmentation equals the whole-signal pass",
           mismatches == 0, detail);
}

// ---------------------------------------------------------------------------
// 3 & 4. synthetic corpora; 8. real-time headroom

struct CorpusOutcome {
    DetectionMetrics detection;
    double mae_cpm = 0.0;
    double mae_cps_value = 0.0;
    double mean_window_ms = 0.0;
    double elapsed_s = 0.0;
};

CorpusOutcome run_corpus(bool noisy) {
    const auto start = std::chrono::steady_clock::now();
    MatchResult pooled;
    std::vector<double> cpm_errors;
    std::vector<double> cps_err;
    std::vector<double> window_times;

    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        SynthMealSpec spec;
        spec.seed = seed;
        spec.duration_s = 60.0 + (seed - 1) * (240.0 / 19.0);  // 60 .. 300 s
        spec.chews_per_swallow_mean = 8.0 + (seed % 12);
        if (noisy) {
            spec.noise_floor_db = -50.0;
            spec.artifact_rate = 0.10;
        }
        const SynthMeal meal = synth_meal(spec);

        SessionConfig config;
        config.rng_seed = seed;
        StreamEngine engine(config, nullptr, nullptr);
        engine.push_samples(meal.samples);
        engine.finish();
        for (const double ms : engine.window_times_ms()) {
            window_times.push_back(ms);
        }

        std::vector<double> chews;
        for (const auto& event : engine.session().timeline.events) {
            if (event.kind == EventKind::Chew) {
                chews.push_back(event.time_s);
            }
        }
        const auto matching =
            match_events(chews, meal.truth.with_label(AnnLabel::Chew));
        pooled.true_positives += matching.true_positives;
        pooled.false_positives += matching.false_positives;
        pooled.false_negatives += matching.false_negatives;
        for (const double e : chews_per_min_errors(chews, meal.truth)) {
            cpm_errors.push_back(e);
        }
        for (const double e : cps_errors(chews, meal.truth)) {
            cps_err.push_back(e);
        }
    }

    CorpusOutcome outcome;
    outcome.detection = detection_metrics(pooled);
    outcome.mae_cpm = std::accumulate(cpm_errors.begin(), cpm_errors.end(), 0.0) /
                      static_cast<double>(cpm_errors.size());
    outcome.mae_cps_value = std::accumulate(cps_err.begin(), cps_err.end(), 0.0) /
                            static_cast<double>(cps_err.size());
    outcome.mean_window_ms =
        std::accumulate(window_times.begin(), window_times.end(), 0.0) /
        static_cast<double>(window_times.size());
    outcome.elapsed_s = seconds_since(start);
    return outcome;
}

// ---------------------------------------------------------------------------
// 5. mel correctness

void criterion_mel() {
    const SessionConfig config;
    bool pass = true;
    std::string why = "shape 38x128, floor, 1 kHz argmax, Parseval";

    std::mt19937 rng(5);
    for (int trial = 0; trial < 3 && pass; ++trial) {
        std::vector<float> clip(6400);
        for (float& sample : clip) {
            sample = static_cast<float>(uniform_range(rng, -0.9, 0.9));
        }
        const auto mel = log_mel(clip, config);
        if (mel.frames != 38 || mel.bins != 128) {
            pass = false;
            why = "shape mismatch";
        }
    }

    if (pass) {
        const auto mel = log_mel(std::vector<float>(6400, 0.0f), config);
        for (const double value : mel.values) {
            if (value != std::log(1e-10)) {
                pass = false;
                why = "silence clip not at uniform floor";
                break;
            }
        }
    }

    if (pass) {
        const double mel_max = 2595.0 * std::log10(1.0 + 8000.0 / 700.0);
        int nearest = -1;
        double best = 1e9;
        for (int b = 0; b < 128; ++b) {
            const double center_hz =
                700.0 * (std::pow(10.0, mel_max * (b + 1) / 129.0 / 2595.0) - 1.0);
            if (std::abs(center_hz - 1000.0) < best) {
                best = std::abs(center_hz - 1000.0);
                nearest = b;
            }
        }
        std::vector<float> sine(6400);
        for (std::size_t i = 0; i < sine.size(); ++i) {
            sine[i] =
                0.8f * static_cast<float>(std::sin(2.0 * M_PI * 1000.0 * i / 16000.0));
        }
        const auto mel = log_mel(sine, config);
        for (std::size_t frame = 0; frame < mel.frames && pass; ++frame) {
            int argmax = 0;
            double top = mel.at(frame, 0);
            for (int b = 1; b < 128; ++b) {
                if (mel.at(frame, b) > top) {
                    top = mel.at(frame, b);
                    argmax = b;
                }
            }
            if (argmax != nearest) {
                pass = false;
                why = "1 kHz argmax off the nearest HTK center";
            }
        }
    }

    if (pass) {
        const auto window = hann_window(400);
        for (int trial = 0; trial < 10 && pass; ++trial) {
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
            if (std::abs(spectrum_energy - time_energy) > 1e-6 * time_energy) {
                pass = false;
                why = "Parseval residual above 1e-6";
            }
        }
    }

    report(5, "log-mel features", pass, why);
}

// ---------------------------------------------------------------------------
// 6. intervention policy properties over fuzzed traces

void criterion_policy() {
    const SessionConfig config;
    std::mt19937 rng(60601);
    long cooldown_violations = 0;
    long grammar_violations = 0;
    long silent_violations = 0;
    long tail_draws = 0;
    long tail_medium = 0;

    for (int trace = 0; trace < 10000; ++trace) {
        SessionConfig policy_config = config;
        policy_config.rng_seed = static_cast<std::uint32_t>(trace + 1);
        InterventionPolicy policy(policy_config, &PromptLibrary::bundled_default());
        double now = 0.0;
        double last_prompt = -1.0;
        int shorts_in_cycle = 0;
        for (int step = 0; step < 30; ++step) {
            now += uniform_range(rng, 0.5, 45.0);
            PaceEstimate pace;
            pace.cps_last = 5 + static_cast<int>(uniform_index(rng, 25));
            pace.cps_smoothed = uniform_range(rng, 5.0, 30.0);
            pace.total_swallows = static_cast<std::int64_t>(uniform_index(rng, 5));
            const bool fired = policy.evaluate_trigger(pace, now);
            if (!fired) {
                continue;
            }
            if (pace.cps_smoothed >= config.cps_trigger_threshold) {
                ++silent_violations;
            }
            if (last_prompt >= 0.0 && now - last_prompt < config.min_prompt_interval_s) {
                ++cooldown_violations;
            }
            const PromptEvent prompt = policy.next_prompt(pace, now);
            last_prompt = now;
            if (prompt.length_class == PromptLength::Short) {
                ++shorts_in_cycle;
                if (shorts_in_cycle > 4) {
                    ++grammar_violations;
                }
            } else {
                if (shorts_in_cycle < 2) {
                    ++grammar_violations;
                }
                shorts_in_cycle = 0;
                ++tail_draws;
                if (prompt.length_class == PromptLength::Medium) {
                    ++tail_medium;
                }
            }
        }
    }

    const double medium_fraction =
        tail_draws > 0 ? static_cast<double>(tail_medium) / static_cast<double>(tail_draws)
                       : 0.0;
    const bool pass = cooldown_violations == 0 && grammar_violations == 0 &&
                      silent_violations == 0 && tail_draws >= 10000 &&
                      std::abs(medium_fraction - 0.5) <= 0.02;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "10000 traces: %ld cooldown, %ld grammar, %ld silent-pace violations; "
                  "medium fraction %.4f over %ld tail draws",
                  cooldown_violations, grammar_violations, silent_violations,
                  medium_fraction, tail_draws);
    report(6, "policy cooldown, cycle grammar, and tail split", pass, detail);
}

// ---------------------------------------------------------------------------
// 7. determinism and stream/replay equivalence

void criterion_determinism() {
    SynthMealSpec spec;
    spec.duration_s = 75.0;
    spec.seed = 23;
    spec.chews_per_swallow_mean = 8.0;
    const SynthMeal meal = synth_meal(spec);

    SessionConfig config;
    config.rng_seed = 23;

    const auto run_once = [&] {
        std::string log;
        StreamEngine engine(config, nullptr, [&](const EventLogRecord& record) {
            log += to_json_line(record);
            log += '\n';
        });
        engine.push_samples(meal.samples);
        engine.finish();
        return log;
    };
    const std::string first = run_once();
    const std::string second = run_once();

    // stream side: identical samples pushed in odd-sized chunks
    std::string streamed;
    StreamEngine engine(config, nullptr, [&](const EventLogRecord& record) {
        streamed += to_json_line(record);
        streamed += '\n';
    });
    std::size_t cursor = 0;
    std::mt19937 rng(99);
    while (cursor < meal.samples.size()) {
        const std::size_t take =
            std::min<std::size_t>(1 + uniform_index(rng, 30000),
                                  meal.samples.size() - cursor);
        engine.push_samples({meal.samples.data() + cursor, take});
        cursor += take;
    }
    engine.finish();

    const bool pass = !first.empty() && first == second && streamed == first;
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "replay x2 byte-identical: %s; chunked stream identical: %s",
                  first == second ? "yes" : "no", streamed == first ? "yes" : "no");
    report(7, "end-to-end determinism", pass, detail);
}

// ---------------------------------------------------------------------------
// 9. metric sanity against published figures

void criterion_metric_sanity() {
    const auto metrics = detection_metrics(95, 1, 5);
    const bool detection_ok = std::abs(metrics.precision - 0.9896) < 5e-5 &&
                              std::abs(metrics.recall - 0.95) < 5e-5 &&
                              std::abs(metrics.f1 - 0.9694) < 5e-5;

    std::vector<AnnInterval> intervals;
    double t = 0.0;
    for (int i = 0; i < 24521; ++i) {
        intervals.push_back(AnnInterval{t, t + 0.01, AnnLabel::Chew});
        t += 0.02;
    }
    for (int i = 0; i < 1114; ++i) {
        intervals.push_back(AnnInterval{t, t + 0.01, AnnLabel::Swallow});
        t += 0.02;
    }
    const AnnotationTrack track = make_track(std::move(intervals), "mock-aggregate");
    const auto stats = dataset_stats(std::vector<AnnotationTrack>{track});
    const bool stats_ok = stats.aggregate.mean_cps.has_value() &&
                          std::abs(*stats.aggregate.mean_cps - 22.01) <= 0.01;

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "P=%.4f R=%.4f F1=%.4f; aggregate CPS=%.4f",
                  metrics.precision, metrics.recall, metrics.f1,
                  stats.aggregate.mean_cps ? *stats.aggregate.mean_cps : -1.0);
    report(9, "metric arithmetic at published operating points",
           detection_ok && stats_ok, detail);
}

}  // namespace

int main() {
    criterion_pace_oracle();
    criterion_segmenter_equivalence();

    const CorpusOutcome clean = run_corpus(false);
    {
        char detail[220];
        std::snprintf(detail, sizeof(detail),
                      "F1=%.4f (TP=%lld FP=%lld FN=%lld), MAE chews/min=%.4f, "
                      "MAE CPS=%.4f, %.1f s",
                      clean.detection.f1,
                      static_cast<long long>(clean.detection.true_positives),
                      static_cast<long long>(clean.detection.false_positives),
                      static_cast<long long>(clean.detection.false_negatives),
                      clean.mae_cpm, clean.mae_cps_value, clean.elapsed_s);
        report(3, "clean synthetic corpus",
               clean.detection.f1 >= 0.99 && clean.mae_cpm <= 0.2 &&
                   clean.mae_cps_value <= 1.0 && clean.elapsed_s < 60.0,
               detail);
    }

    const CorpusOutcome noisy = run_corpus(true);
    {
        char detail[160];
        std::snprintf(detail, sizeof(detail), "F1=%.4f (TP=%lld FP=%lld FN=%lld)",
                      noisy.detection.f1,
                      static_cast<long long>(noisy.detection.true_positives),
                      static_cast<long long>(noisy.detection.false_positives),
                      static_cast<long long>(noisy.detection.false_negatives));
        report(4, "noisy synthetic corpus with artifact bursts",
               noisy.detection.f1 >= 0.95, detail);
    }

    criterion_mel();
    criterion_policy();
    criterion_determinism();

    {
        const double mean_ms = std::max(clean.mean_window_ms, noisy.mean_window_ms);
        char detail[120];
        std::snprintf(detail, sizeof(detail),
                      "mean %.2f ms per 3 s window (budget 300 ms)", mean_ms);
        report(8, "real-time feasibility", mean_ms > 0.0 && mean_ms < 300.0, detail);
    }

    criterion_metric_sanity();

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED",
                g_failures);
    return g_failures;
}
