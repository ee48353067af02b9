#pragma once

#include <cstdint>
#include <string>

namespace paceloop {

// Tunables for one session. The defaults are the deployed operating point:
// 50 ms frames gated at -40 dBFS, 100-400 ms candidate segments bridged
// across silences up to 150 ms, 0.8 s absolute / 1.5x adaptive swallow
// thresholds, 3 s processing windows, a 30 s prompt cooldown, and a
// chews-per-swallow trigger below 20.
struct SessionConfig {
    int sample_rate_hz = 16000;  // fixed; other rates are rejected, not resampled
    double frame_len_ms = 50.0;
    double energy_threshold_db = -40.0;  // frame RMS, dBFS
    double min_segment_ms = 100.0;
    double max_segment_ms = 400.0;
    double silence_tolerance_ms = 150.0;
    double clip_len_ms = 400.0;
    double classifier_threshold = 0.5;
    double swallow_abs_gap_s = 0.8;
    double swallow_rel_factor = 1.5;
    double cps_trigger_threshold = 20.0;
    int cps_smoothing_intervals = 2;  // trigger smoothing over recent intervals
    double min_prompt_interval_s = 30.0;
    double window_len_s = 3.0;
    std::uint32_t rng_seed = 0;
    std::string prompt_library_path;  // empty -> built-in default library

    int frame_len_samples() const {
        return static_cast<int>(sample_rate_hz * frame_len_ms / 1000.0 + 0.5);
    }
    int clip_len_samples() const {
        return static_cast<int>(sample_rate_hz * clip_len_ms / 1000.0 + 0.5);
    }
    int window_len_samples() const {
        return static_cast<int>(sample_rate_hz * window_len_s + 0.5);
    }
};

// Throws Error("invalid-config") naming the violated invariant.
void validate(const SessionConfig& config);

// Flat key=value file mirroring the SessionConfig field names. '#' starts a
// comment, blank lines are skipped, unknown keys are rejected.
SessionConfig load_config_file(const std::string& path);

// Applies one key=value override (shared by the file loader and CLI flags).
void set_config_value(SessionConfig& config, const std::string& key,
                      const std::string& value);

}  // namespace paceloop
