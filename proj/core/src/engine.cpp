#include "paceloop/engine.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "paceloop/error.hpp"
#include "paceloop/wav.hpp"

namespace paceloop {

namespace {

EventLogRecord pace_record(const PaceEstimate& estimate) {
    EventLogRecord record;
    record.kind = RecordKind::Pace;
    record.t = estimate.as_of_s;
    record.cps_last = estimate.cps_last;
    record.cps_running = estimate.cps_running;
    record.cps_smoothed = estimate.cps_smoothed;
    record.chews_per_min = estimate.chews_per_min;
    record.total_chews = estimate.total_chews;
    record.total_swallows = estimate.total_swallows;
    return record;
}

EventLogRecord prompt_record(const PromptEvent& prompt) {
    EventLogRecord record;
    record.kind = RecordKind::Prompt;
    record.t = prompt.time_s;
    record.prompt_id = prompt.prompt_id;
    record.family = to_string(prompt.family);
    record.length_class = to_string(prompt.length_class);
    record.duration_s = prompt.nominal_duration_s;
    record.text = prompt.text;
    return record;
}

}  // namespace

StreamEngine::StreamEngine(const SessionConfig& config,
                           std::shared_ptr<const ChewScorer> scorer, RecordSink sink)
    : session_(new_session(config)),
      scorer_(scorer ? std::move(scorer) : std::make_shared<HeuristicScorer>()),
      sink_(std::move(sink)) {}

void StreamEngine::emit(const EventLogRecord& record) {
    if (sink_) {
        sink_(record);
    }
}

void StreamEngine::begin() {
    if (begun_) {
        return;
    }
    begun_ = true;

    EventLogRecord header;
    header.kind = RecordKind::Header;
    header.schema_version = 1;
    header.seed = session_.config.rng_seed;
    emit(header);

    const PromptEvent prompt = session_.policy.pre_meal_prompt();
    append_prompt(session_.timeline, prompt);
    emit(prompt_record(prompt));
}

void StreamEngine::push_samples(std::span<const float> samples) {
    begin();
    pending_.insert(pending_.end(), samples.begin(), samples.end());
    const auto window = static_cast<std::size_t>(session_.config.window_len_samples());
    std::size_t offset = 0;
    while (pending_.size() - offset >= window) {
        process_window({pending_.data() + offset, window});
        offset += window;
    }
    pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(offset));
}

void StreamEngine::process_window(std::span<const float> samples) {
    const auto start = std::chrono::steady_clock::now();

    audio_.append(samples);
    samples_consumed_ += static_cast<std::int64_t>(samples.size());

    const auto frame_len = static_cast<std::int64_t>(session_.config.frame_len_samples());
    const double frame_len_s = session_.config.frame_len_ms / 1000.0;
    while ((frames_done_ + 1) * frame_len <= samples_consumed_) {
        const std::vector<float> frame_samples =
            audio_.slice(frames_done_ * frame_len, frame_len);
        const FrameLevel frame{frames_done_,
                               static_cast<double>(frames_done_) * frame_len_s,
                               frame_rms_db(frame_samples)};
        process_frame(frame);
        ++frames_done_;
    }

    const double now_s = static_cast<double>(samples_consumed_) /
                         static_cast<double>(session_.config.sample_rate_hz);
    window_boundary(now_s);

    // Audio behind any open segment is no longer needed.
    const double keep_from_s = session_.segmenter.earliest_needed_s(
        static_cast<double>(frames_done_) * frame_len_s);
    audio_.trim_before(static_cast<std::int64_t>(
        std::llround(std::max(0.0, keep_from_s - 0.1) * session_.config.sample_rate_hz)));

    const auto elapsed = std::chrono::steady_clock::now() - start;
    window_times_ms_.push_back(
        std::chrono::duration<double, std::milli>(elapsed).count());
}

void StreamEngine::process_frame(const FrameLevel& frame) {
    if (const auto bounds = session_.segmenter.step(frame)) {
        handle_bounds(*bounds);
    }
}

void StreamEngine::handle_bounds(const SegmentBounds& bounds) {
    const CandidateSegment segment =
        extract_clip(audio_, next_segment_id_++, bounds, session_.config);
    const double probability = scorer_->score(segment);
    const ScoreDecision decision = classify(segment.id, probability, session_.config);
    if (!decision.is_chew) {
        return;
    }

    const IngestionEvent chew{EventKind::Chew, segment.start_s, decision.probability,
                              segment.id};
    const PaceStepResult step = session_.pace.on_chew(chew.time_s);
    if (step.swallow) {
        flush_boundaries(step.swallow->time_s);
        append_event(session_.timeline, *step.swallow);
        EventLogRecord record;
        record.kind = RecordKind::Swallow;
        record.t = step.swallow->time_s;
        record.confidence = step.swallow->confidence;
        record.cps_last = step.estimate.cps_last;
        emit(record);
    }
    flush_boundaries(chew.time_s);
    append_event(session_.timeline, chew);
    EventLogRecord record;
    record.kind = RecordKind::Chew;
    record.t = chew.time_s;
    record.confidence = chew.confidence;
    record.segment_id = chew.source_segment;
    emit(record);

    if (step.swallow) {
        maybe_prompt(step.estimate, chew.time_s);
    }
}

void StreamEngine::window_boundary(double now_s) {
    pending_boundaries_s_.push_back(now_s);

    // A boundary record may only go out once no future event can predate it.
    // Future chews start at the open segment (or after this boundary); future
    // swallows land either mid-gap after the last chew or, at meal end, at
    // last chew + swallow_abs_gap_s.
    const double earliest_onset = session_.segmenter.earliest_needed_s(now_s);
    double floor = earliest_onset;
    if (const auto last_chew = session_.pace.state().last_chew_time_s) {
        floor = std::min((*last_chew + earliest_onset) / 2.0,
                         *last_chew + session_.config.swallow_abs_gap_s);
    }
    flush_boundaries(floor);
}

void StreamEngine::flush_boundaries(double up_to_s) {
    while (!pending_boundaries_s_.empty() && pending_boundaries_s_.front() <= up_to_s) {
        const double boundary = pending_boundaries_s_.front();
        pending_boundaries_s_.pop_front();
        const PaceEstimate estimate = session_.pace.estimate(boundary);
        emit(pace_record(estimate));
        maybe_prompt(estimate, boundary);
    }
}

void StreamEngine::maybe_prompt(const PaceEstimate& estimate, double now_s) {
    if (!session_.policy.evaluate_trigger(estimate, now_s)) {
        return;
    }
    const PromptEvent prompt = session_.policy.next_prompt(estimate, now_s);
    append_prompt(session_.timeline, prompt);
    emit(prompt_record(prompt));
}

void StreamEngine::finish() {
    begin();
    if (finished_) {
        return;
    }
    finished_ = true;

    if (!pending_.empty()) {
        const std::vector<float> rest(pending_.begin(), pending_.end());
        pending_.clear();
        process_window(rest);
    }

    if (const auto bounds = session_.segmenter.flush()) {
        handle_bounds(*bounds);
    }

    const double duration = duration_s();
    const PaceStepResult final_step = session_.pace.finalize(duration);
    if (final_step.swallow) {
        flush_boundaries(final_step.swallow->time_s);
        append_event(session_.timeline, *final_step.swallow);
        EventLogRecord record;
        record.kind = RecordKind::Swallow;
        record.t = final_step.swallow->time_s;
        record.confidence = final_step.swallow->confidence;
        record.cps_last = final_step.estimate.cps_last;
        emit(record);
    }
    flush_boundaries(std::numeric_limits<double>::infinity());

    summary_ = post_meal_summary(session_.timeline, final_step.estimate,
                                 session_.pace.state().interval_cps, duration);

    EventLogRecord record;
    record.kind = RecordKind::Summary;
    record.t = final_step.estimate.as_of_s;
    record.meal_duration_s = summary_.duration_s;
    record.total_chews = summary_.total_chews;
    record.total_swallows = summary_.total_swallows;
    record.mean_cps = summary_.mean_cps;
    record.chews_per_min_mean = summary_.chews_per_min_mean;
    record.prompts_delivered = summary_.prompts_delivered;
    record.interval_cps = summary_.interval_cps;
    emit(record);
}

double StreamEngine::duration_s() const {
    return static_cast<double>(samples_consumed_) /
           static_cast<double>(session_.config.sample_rate_hz);
}

double StreamEngine::mean_window_time_ms() const {
    if (window_times_ms_.empty()) {
        return 0.0;
    }
    return std::accumulate(window_times_ms_.begin(), window_times_ms_.end(), 0.0) /
           static_cast<double>(window_times_ms_.size());
}

ReplayResult run_replay(const std::string& wav_path, const SessionConfig& config,
                        const std::string& out_dir,
                        const std::optional<std::string>& truth_path,
                        std::shared_ptr<const ChewScorer> scorer) {
    const std::vector<float> samples = read_wav(wav_path);

    ReplayResult result;
    StreamEngine engine(config, std::move(scorer),
                        [&](const EventLogRecord& record) {
                            result.records.push_back(record);
                        });
    engine.push_samples(samples);
    engine.finish();
    result.summary = engine.summary();
    result.duration_s = engine.duration_s();
    result.mean_window_time_ms = engine.mean_window_time_ms();

    if (truth_path) {
        const AnnotationTrack truth = load_annotations(*truth_path);
        std::vector<double> chews;
        std::vector<double> swallows;
        for (const IngestionEvent& event : engine.session().timeline.events) {
            (event.kind == EventKind::Chew ? chews : swallows).push_back(event.time_s);
        }
        result.report = evaluate_against_truth(chews, swallows, truth);
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto dir = std::filesystem::path(out_dir);
        write_event_log(result.records, (dir / "events.jsonl").string());
        std::ofstream summary_out(dir / "summary.txt");
        summary_out << summary_text(result.summary);
        if (result.report) {
            std::ofstream report_out(dir / "report.txt");
            report_out << report_text(*result.report);
            std::ofstream csv_out(dir / "report.csv");
            csv_out << report_csv(*result.report);
        }
    }
    return result;
}

SessionSummary run_stream(std::istream& in, std::ostream& out, std::ostream& diag,
                          const SessionConfig& config,
                          std::shared_ptr<const ChewScorer> scorer) {
    StreamEngine engine(config, std::move(scorer), [&](const EventLogRecord& record) {
        out << to_json_line(record) << '\n';
        if (record.kind == RecordKind::Pace || record.kind == RecordKind::Summary) {
            out.flush();
        }
    });

    std::vector<unsigned char> carry;
    std::vector<char> buffer(65536);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) {
            break;
        }
        carry.insert(carry.end(), buffer.data(), buffer.data() + got);
        const std::size_t usable = carry.size() - carry.size() % 2;
        const std::vector<float> samples = decode_pcm16({carry.data(), usable});
        engine.push_samples(samples);
        carry.erase(carry.begin(), carry.begin() + static_cast<std::ptrdiff_t>(usable));
    }
    if (!carry.empty()) {
        diag << "warning: truncated-frame: discarding trailing odd byte at end of stream\n";
    }
    engine.finish();
    out.flush();
    return engine.summary();
}

}  // namespace paceloop
