#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "paceloop/evaluation.hpp"

namespace paceloop {

enum class BurstTemplate { LowFreqChew, BroadbandArtifact };

// Desk-scale meal generator. Chew bursts are placed on the 50 ms frame grid
// with inter-chew gaps around chew_gap_mean_s inside each run and swallow
// gaps around swallow_gap_mean_s between runs; every run is closed by a truth
// swallow labeled at the gap midpoint. artifact_rate plants broadband
// distractor bursts (per chew, inside swallow gaps) that pass the duration
// gate but should be rejected by the classifier.
struct SynthMealSpec {
    double duration_s = 120.0;
    double chew_gap_mean_s = 0.424;
    double chew_gap_jitter_s = 0.025;
    double swallow_gap_mean_s = 1.919;
    double swallow_gap_jitter_s = 0.15;
    double chews_per_swallow_mean = 15.0;
    BurstTemplate chew_template = BurstTemplate::LowFreqChew;
    double artifact_rate = 0.0;
    double noise_floor_db = -120.0;  // broadband noise RMS in dBFS; -120 = none
    std::uint32_t seed = 1;
};

// key=value file mirroring the SynthMealSpec field names.
SynthMealSpec load_synth_spec(const std::string& path);

struct SynthMeal {
    std::vector<float> samples;  // 16 kHz, [-1,1]
    AnnotationTrack truth;
    std::int64_t planted_chews = 0;
    std::int64_t planted_swallows = 0;
    std::int64_t planted_artifacts = 0;
    std::vector<int> run_lengths;  // chews per run, the generator's own CPS record
};

// Deterministic for a fixed spec (seed included).
SynthMeal synth_meal(const SynthMealSpec& spec);

}  // namespace paceloop
