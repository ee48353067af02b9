#pragma once

#include <deque>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paceloop/audio_buffer.hpp"
#include "paceloop/evaluation.hpp"
#include "paceloop/event_log.hpp"
#include "paceloop/scorer.hpp"
#include "paceloop/session.hpp"

namespace paceloop {

using RecordSink = std::function<void(const EventLogRecord&)>;

// Drives the full loop over an incoming sample stream in window_len_s hops:
// segment -> feature/classify -> pace -> trigger. Segmenter state carries
// across window boundaries, so segments spanning a boundary are kept. Each
// processed window's wall-clock cost is recorded for the real-time report;
// timings never enter the event log.
//
// Chew events are stamped at the segment onset, which is known only when the
// segment closes — possibly after the next window boundary. Boundary records
// (pace snapshot + trigger check) therefore stay pending until no future
// event can carry an earlier timestamp, keeping the emitted record stream in
// time order.
class StreamEngine {
public:
    StreamEngine(const SessionConfig& config,
                 std::shared_ptr<const ChewScorer> scorer, RecordSink sink);

    // Emits the header record and the pre-meal goal prompt. Called lazily by
    // push_samples/finish when not invoked explicitly.
    void begin();

    void push_samples(std::span<const float> samples);

    // End of stream: processes the remaining partial window, closes any open
    // segment, appends the meal-end terminal swallow and the summary record.
    void finish();

    const SessionState& session() const { return session_; }
    const SessionSummary& summary() const { return summary_; }
    double duration_s() const;
    const std::vector<double>& window_times_ms() const { return window_times_ms_; }
    double mean_window_time_ms() const;

private:
    void process_window(std::span<const float> samples);
    void process_frame(const FrameLevel& frame);
    void handle_bounds(const SegmentBounds& bounds);
    void window_boundary(double now_s);
    // Emits pending boundary records whose time is <= up_to_s.
    void flush_boundaries(double up_to_s);
    void maybe_prompt(const PaceEstimate& estimate, double now_s);
    void emit(const EventLogRecord& record);

    SessionState session_;
    std::shared_ptr<const ChewScorer> scorer_;
    RecordSink sink_;
    AudioBuffer audio_;
    std::vector<float> pending_;
    std::deque<double> pending_boundaries_s_;
    std::int64_t samples_consumed_ = 0;
    std::int64_t frames_done_ = 0;
    std::int64_t next_segment_id_ = 0;
    SessionSummary summary_;
    std::vector<double> window_times_ms_;
    bool begun_ = false;
    bool finished_ = false;
};

struct ReplayResult {
    std::vector<EventLogRecord> records;
    SessionSummary summary;
    double duration_s = 0.0;
    double mean_window_time_ms = 0.0;
    std::optional<EvaluationReport> report;  // when a truth track was supplied
};

// Full pipeline over a WAV file; writes events.jsonl, summary.txt and, when
// truth annotations are given, report.txt/report.csv into out_dir (left
// in-memory when out_dir is empty).
ReplayResult run_replay(const std::string& wav_path, const SessionConfig& config,
                        const std::string& out_dir,
                        const std::optional<std::string>& truth_path,
                        std::shared_ptr<const ChewScorer> scorer = nullptr);

// Raw signed 16-bit little-endian mono PCM on `in`, JSONL events on `out`,
// flushed at every window boundary. A trailing odd byte is discarded with a
// truncated-frame warning on `diag`.
SessionSummary run_stream(std::istream& in, std::ostream& out, std::ostream& diag,
                          const SessionConfig& config,
                          std::shared_ptr<const ChewScorer> scorer = nullptr);

}  // namespace paceloop
