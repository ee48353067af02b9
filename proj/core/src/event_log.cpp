#include "paceloop/event_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "paceloop/error.hpp"

namespace paceloop {

namespace {

std::string num(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.3f", value);
    return buffer;
}

std::string quoted(const std::string& text) {
    return nlohmann::json(text).dump();
}

const char* kind_name(RecordKind kind) {
    switch (kind) {
        case RecordKind::Header: return "header";
        case RecordKind::Chew: return "chew";
        case RecordKind::Swallow: return "swallow";
        case RecordKind::Prompt: return "prompt";
        case RecordKind::Pace: return "pace";
        case RecordKind::Summary: return "summary";
    }
    return "unknown";
}

std::optional<RecordKind> parse_kind(const std::string& name) {
    if (name == "header") return RecordKind::Header;
    if (name == "chew") return RecordKind::Chew;
    if (name == "swallow") return RecordKind::Swallow;
    if (name == "prompt") return RecordKind::Prompt;
    if (name == "pace") return RecordKind::Pace;
    if (name == "summary") return RecordKind::Summary;
    return std::nullopt;
}

}  // namespace

std::string to_json_line(const EventLogRecord& r) {
    std::ostringstream out;
    out << "{\"kind\":\"" << kind_name(r.kind) << "\"";
    switch (r.kind) {
        case RecordKind::Header:
            out << ",\"schema_version\":" << r.schema_version << ",\"seed\":" << r.seed;
            break;
        case RecordKind::Chew:
            out << ",\"t\":" << num(r.t) << ",\"confidence\":" << num(r.confidence);
            if (r.segment_id) {
                out << ",\"segment_id\":" << *r.segment_id;
            }
            break;
        case RecordKind::Swallow:
            out << ",\"t\":" << num(r.t) << ",\"confidence\":" << num(r.confidence)
                << ",\"cps_last\":" << r.cps_last;
            break;
        case RecordKind::Prompt:
            out << ",\"t\":" << num(r.t) << ",\"prompt_id\":" << quoted(r.prompt_id)
                << ",\"family\":" << quoted(r.family)
                << ",\"length_class\":" << quoted(r.length_class)
                << ",\"duration_s\":" << num(r.duration_s)
                << ",\"text\":" << quoted(r.text);
            break;
        case RecordKind::Pace:
            out << ",\"t\":" << num(r.t) << ",\"cps_last\":" << r.cps_last
                << ",\"cps_running\":" << num(r.cps_running)
                << ",\"cps_smoothed\":" << num(r.cps_smoothed)
                << ",\"chews_per_min\":" << num(r.chews_per_min)
                << ",\"total_chews\":" << r.total_chews
                << ",\"total_swallows\":" << r.total_swallows;
            break;
        case RecordKind::Summary:
            out << ",\"t\":" << num(r.t) << ",\"duration_s\":" << num(r.meal_duration_s)
                << ",\"total_chews\":" << r.total_chews
                << ",\"total_swallows\":" << r.total_swallows;
            if (r.mean_cps) {
                out << ",\"mean_cps\":" << num(*r.mean_cps);
            }
            out << ",\"chews_per_min_mean\":" << num(r.chews_per_min_mean)
                << ",\"prompts_delivered\":" << r.prompts_delivered
                << ",\"interval_cps\":[";
            for (std::size_t i = 0; i < r.interval_cps.size(); ++i) {
                if (i > 0) {
                    out << ',';
                }
                out << r.interval_cps[i];
            }
            out << "]";
            break;
    }
    out << "}";
    return out.str();
}

EventLogRecord parse_json_line(const std::string& line) {
    nlohmann::json json;
    try {
        json = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        fail("parse-error", std::string("bad event log line: ") + e.what());
    }
    const auto kind = parse_kind(json.value("kind", ""));
    if (!kind) {
        fail("parse-error", "unknown record kind in '" + line + "'");
    }
    EventLogRecord record;
    record.kind = *kind;
    record.t = json.value("t", 0.0);
    switch (record.kind) {
        case RecordKind::Header:
            record.schema_version = json.value("schema_version", 0);
            record.seed = json.value("seed", 0u);
            break;
        case RecordKind::Chew:
            record.confidence = json.value("confidence", 0.0);
            if (json.contains("segment_id")) {
                record.segment_id = json["segment_id"].get<std::int64_t>();
            }
            break;
        case RecordKind::Swallow:
            record.confidence = json.value("confidence", 0.0);
            record.cps_last = json.value("cps_last", 0);
            break;
        case RecordKind::Prompt:
            record.prompt_id = json.value("prompt_id", "");
            record.family = json.value("family", "");
            record.length_class = json.value("length_class", "");
            record.duration_s = json.value("duration_s", 0.0);
            record.text = json.value("text", "");
            break;
        case RecordKind::Pace:
            record.cps_last = json.value("cps_last", 0);
            record.cps_running = json.value("cps_running", 0.0);
            record.cps_smoothed = json.value("cps_smoothed", 0.0);
            record.chews_per_min = json.value("chews_per_min", 0.0);
            record.total_chews = json.value("total_chews", 0);
            record.total_swallows = json.value("total_swallows", 0);
            break;
        case RecordKind::Summary:
            record.meal_duration_s = json.value("duration_s", 0.0);
            record.total_chews = json.value("total_chews", 0);
            record.total_swallows = json.value("total_swallows", 0);
            if (json.contains("mean_cps")) {
                record.mean_cps = json["mean_cps"].get<double>();
            }
            record.chews_per_min_mean = json.value("chews_per_min_mean", 0.0);
            record.prompts_delivered = json.value("prompts_delivered", 0);
            if (json.contains("interval_cps")) {
                record.interval_cps = json["interval_cps"].get<std::vector<int>>();
            }
            break;
    }
    return record;
}

void write_event_log(const std::vector<EventLogRecord>& records,
                     const std::string& path) {
    double last_t = 0.0;
    bool have_t = false;
    for (const EventLogRecord& record : records) {
        if (record.kind == RecordKind::Header) {
            continue;
        }
        if (have_t && record.t < last_t) {
            fail("out-of-order-event",
                 "record at " + std::to_string(record.t) + " s after " +
                     std::to_string(last_t) + " s");
        }
        last_t = record.t;
        have_t = true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail("io-error", "cannot write event log '" + path + "'");
    }
    for (const EventLogRecord& record : records) {
        out << to_json_line(record) << '\n';
    }
    if (!out) {
        fail("io-error", "failed writing event log '" + path + "'");
    }
}

std::vector<EventLogRecord> read_event_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("io-error", "cannot open event log '" + path + "'");
    }
    std::vector<EventLogRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        records.push_back(parse_json_line(line));
    }
    return records;
}

}  // namespace paceloop
