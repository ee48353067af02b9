#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace paceloop {

enum class RecordKind { Header, Chew, Swallow, Prompt, Pace, Summary };

// One JSONL line. A flat struct keyed by kind keeps the writer trivial and
// the golden files byte-stable: fields are emitted in a fixed order and all
// floats use fixed 3-decimal precision.
struct EventLogRecord {
    RecordKind kind = RecordKind::Header;
    double t = 0.0;

    // header
    int schema_version = 1;
    std::uint32_t seed = 0;

    // chew / swallow
    double confidence = 0.0;
    std::optional<std::int64_t> segment_id;
    int cps_last = 0;  // swallow: chews in the interval it closed

    // prompt
    std::string prompt_id;
    std::string family;
    std::string length_class;
    double duration_s = 0.0;
    std::string text;

    // pace
    double cps_running = 0.0;
    double cps_smoothed = 0.0;
    double chews_per_min = 0.0;
    std::int64_t total_chews = 0;
    std::int64_t total_swallows = 0;

    // summary
    double meal_duration_s = 0.0;
    std::optional<double> mean_cps;
    double chews_per_min_mean = 0.0;
    std::int64_t prompts_delivered = 0;
    std::vector<int> interval_cps;
};

std::string to_json_line(const EventLogRecord& record);
EventLogRecord parse_json_line(const std::string& line);

// Records must be time-ordered after the leading header; violations are
// rejected before anything is written.
void write_event_log(const std::vector<EventLogRecord>& records,
                     const std::string& path);
std::vector<EventLogRecord> read_event_log(const std::string& path);

}  // namespace paceloop
