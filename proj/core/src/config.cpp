#include "paceloop/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "paceloop/error.hpp"

namespace paceloop {

namespace {

void require(bool ok, const std::string& invariant) {
    if (!ok) {
        fail("invalid-config", invariant);
    }
}

double parse_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double parsed = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        fail("parse-error", "config key '" + key + "': not a number: '" + value + "'");
    }
    return parsed;
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

}  // namespace

void validate(const SessionConfig& c) {
    require(c.sample_rate_hz == 16000, "sample_rate_hz must be 16000");
    require(c.frame_len_ms > 0, "frame_len_ms must be positive");
    require(c.min_segment_ms > 0, "min_segment_ms must be positive");
    require(c.max_segment_ms > 0, "max_segment_ms must be positive");
    require(c.silence_tolerance_ms > 0, "silence_tolerance_ms must be positive");
    require(c.clip_len_ms > 0, "clip_len_ms must be positive");
    require(c.window_len_s > 0, "window_len_s must be positive");
    require(c.min_segment_ms < c.max_segment_ms,
            "min_segment_ms must be < max_segment_ms");
    require(c.max_segment_ms <= c.clip_len_ms,
            "max_segment_ms must be <= clip_len_ms");
    require(c.classifier_threshold >= 0.0 && c.classifier_threshold <= 1.0,
            "classifier_threshold must be in [0,1]");
    require(c.swallow_abs_gap_s > 0, "swallow_abs_gap_s must be positive");
    require(c.swallow_rel_factor > 1.0, "swallow_rel_factor must be > 1");
    require(c.cps_trigger_threshold > 0, "cps_trigger_threshold must be positive");
    require(c.cps_smoothing_intervals >= 1,
            "cps_smoothing_intervals must be >= 1");
    require(c.min_prompt_interval_s > 0, "min_prompt_interval_s must be positive");
}

void set_config_value(SessionConfig& config, const std::string& key,
                      const std::string& value) {
    if (key == "sample_rate_hz") {
        config.sample_rate_hz = static_cast<int>(parse_number(key, value));
    } else if (key == "frame_len_ms") {
        config.frame_len_ms = parse_number(key, value);
    } else if (key == "energy_threshold_db") {
        config.energy_threshold_db = parse_number(key, value);
    } else if (key == "min_segment_ms") {
        config.min_segment_ms = parse_number(key, value);
    } else if (key == "max_segment_ms") {
        config.max_segment_ms = parse_number(key, value);
    } else if (key == "silence_tolerance_ms") {
        config.silence_tolerance_ms = parse_number(key, value);
    } else if (key == "clip_len_ms") {
        config.clip_len_ms = parse_number(key, value);
    } else if (key == "classifier_threshold") {
        config.classifier_threshold = parse_number(key, value);
    } else if (key == "swallow_abs_gap_s") {
        config.swallow_abs_gap_s = parse_number(key, value);
    } else if (key == "swallow_rel_factor") {
        config.swallow_rel_factor = parse_number(key, value);
    } else if (key == "cps_trigger_threshold") {
        config.cps_trigger_threshold = parse_number(key, value);
    } else if (key == "cps_smoothing_intervals") {
        config.cps_smoothing_intervals = static_cast<int>(parse_number(key, value));
    } else if (key == "min_prompt_interval_s") {
        config.min_prompt_interval_s = parse_number(key, value);
    } else if (key == "window_len_s") {
        config.window_len_s = parse_number(key, value);
    } else if (key == "rng_seed") {
        config.rng_seed = static_cast<std::uint32_t>(parse_number(key, value));
    } else if (key == "prompt_library_path") {
        config.prompt_library_path = value;
    } else {
        fail("parse-error", "unknown config key '" + key + "'");
    }
}

SessionConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail("io-error", "cannot open config file '" + path + "'");
    }
    SessionConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail("parse-error", path + ":" + std::to_string(line_no) +
                                    ": expected key=value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        set_config_value(config, key, value);
    }
    return config;
}

}  // namespace paceloop
