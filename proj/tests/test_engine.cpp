#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "paceloop/engine.hpp"
#include "paceloop/synth.hpp"
#include "paceloop/wav.hpp"

using namespace paceloop;

namespace {

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string synth_wav(const SynthMealSpec& spec, const std::string& name,
                      AnnotationTrack* truth_out = nullptr) {
    const SynthMeal meal = synth_meal(spec);
    const std::string path = "/tmp/paceloop_test_" + name + ".wav";
    write_wav(path, meal.samples);
    if (truth_out) {
        *truth_out = meal.truth;
    }
    return path;
}

}  // namespace

TEST_CASE("replay of a clean meal detects nearly everything") {
    SynthMealSpec spec;
    spec.duration_s = 90.0;
    spec.seed = 2;
    AnnotationTrack truth;
    const std::string wav = synth_wav(spec, "replay", &truth);
    const std::string truth_path = "/tmp/paceloop_test_replay_truth.tsv";
    write_annotations(truth, truth_path);

    SessionConfig config;
    config.rng_seed = 5;
    const ReplayResult result = run_replay(wav, config, "", truth_path, nullptr);
    REQUIRE(result.report.has_value());
    CHECK(result.report->detection.f1 >= 0.99);
    REQUIRE(result.report->mae_chews_per_min.has_value());
    CHECK(*result.report->mae_chews_per_min <= 0.2);
    REQUIRE(result.report->mae_cps.has_value());
    CHECK(*result.report->mae_cps <= 1.0);
    CHECK(result.summary.total_chews > 0);
    CHECK(result.mean_window_time_ms > 0.0);
    std::remove(wav.c_str());
    std::remove(truth_path.c_str());
}

TEST_CASE("same audio, config, and seed replay to byte-identical logs") {
    SynthMealSpec spec;
    spec.duration_s = 60.0;
    spec.seed = 7;
    spec.chews_per_swallow_mean = 8.0;  // fast eater so prompts fire
    const std::string wav = synth_wav(spec, "determinism");

    SessionConfig config;
    config.rng_seed = 7;
    const std::string out_a = "/tmp/paceloop_test_run_a";
    const std::string out_b = "/tmp/paceloop_test_run_b";
    run_replay(wav, config, out_a, std::nullopt, nullptr);
    run_replay(wav, config, out_b, std::nullopt, nullptr);
    const std::string log_a = read_bytes(out_a + "/events.jsonl");
    const std::string log_b = read_bytes(out_b + "/events.jsonl");
    REQUIRE(!log_a.empty());
    CHECK(log_a == log_b);

    // a different seed changes the prompt selections
    config.rng_seed = 8;
    const std::string out_c = "/tmp/paceloop_test_run_c";
    run_replay(wav, config, out_c, std::nullopt, nullptr);
    CHECK(read_bytes(out_c + "/events.jsonl") != log_a);

    std::filesystem::remove_all(out_a);
    std::filesystem::remove_all(out_b);
    std::filesystem::remove_all(out_c);
    std::remove(wav.c_str());
}

TEST_CASE("streaming PCM yields the same events as replaying the WAV") {
    SynthMealSpec spec;
    spec.duration_s = 45.0;
    spec.seed = 4;
    spec.chews_per_swallow_mean = 9.0;
    const SynthMeal meal = synth_meal(spec);
    const std::string wav = "/tmp/paceloop_test_stream.wav";
    write_wav(wav, meal.samples);

    SessionConfig config;
    config.rng_seed = 3;
    const ReplayResult replayed = run_replay(wav, config, "", std::nullopt, nullptr);

    // raw PCM payload = the WAV file minus its 44-byte header
    const std::string wav_bytes = read_bytes(wav);
    std::istringstream pcm(wav_bytes.substr(44));
    std::ostringstream events;
    std::ostringstream diag;
    run_stream(pcm, events, diag, config, nullptr);

    std::ostringstream expected;
    for (const EventLogRecord& record : replayed.records) {
        expected << to_json_line(record) << '\n';
    }
    CHECK(events.str() == expected.str());
    CHECK(diag.str().empty());
    std::remove(wav.c_str());
}

TEST_CASE("an empty stream terminates cleanly with an empty summary") {
    std::istringstream pcm("");
    std::ostringstream events;
    std::ostringstream diag;
    const SessionSummary summary = run_stream(pcm, events, diag, SessionConfig{}, nullptr);
    CHECK(summary.total_chews == 0);
    CHECK(summary.total_swallows == 0);
    CHECK_FALSE(summary.mean_cps.has_value());
    // header + pre-meal prompt + summary, no ingestion events
    const std::string log = events.str();
    CHECK(log.find("\"kind\":\"header\"") != std::string::npos);
    CHECK(log.find("\"kind\":\"summary\"") != std::string::npos);
    CHECK(log.find("\"kind\":\"chew\"") == std::string::npos);
}

TEST_CASE("a stream cut mid-window matches a replay truncated at the same sample") {
    SynthMealSpec spec;
    spec.duration_s = 30.0;
    spec.seed = 6;
    const SynthMeal meal = synth_meal(spec);
    // cut 1.3 s into the fifth window
    const std::size_t cut = static_cast<std::size_t>((4 * 3.0 + 1.3) * 16000);
    const std::vector<float> truncated(meal.samples.begin(),
                                       meal.samples.begin() + cut);
    const std::string wav = "/tmp/paceloop_test_cut.wav";
    write_wav(wav, truncated);

    SessionConfig config;
    const ReplayResult replayed = run_replay(wav, config, "", std::nullopt, nullptr);

    const std::string wav_bytes = read_bytes(wav);
    std::istringstream pcm(wav_bytes.substr(44));
    std::ostringstream events;
    std::ostringstream diag;
    run_stream(pcm, events, diag, config, nullptr);

    std::ostringstream expected;
    for (const EventLogRecord& record : replayed.records) {
        expected << to_json_line(record) << '\n';
    }
    CHECK(events.str() == expected.str());
    std::remove(wav.c_str());
}

TEST_CASE("a trailing odd byte is discarded with a warning") {
    std::istringstream pcm(std::string("\x10\x00\x20", 3));
    std::ostringstream events;
    std::ostringstream diag;
    run_stream(pcm, events, diag, SessionConfig{}, nullptr);
    CHECK(diag.str().find("truncated-frame") != std::string::npos);
}

TEST_CASE("pipeline timelines never emit two swallows without a chew between") {
    SynthMealSpec spec;
    spec.duration_s = 120.0;
    spec.seed = 13;
    spec.chews_per_swallow_mean = 6.0;
    const SynthMeal meal = synth_meal(spec);
    StreamEngine engine(SessionConfig{}, nullptr, nullptr);
    engine.push_samples(meal.samples);
    engine.finish();
    const auto& events = engine.session().timeline.events;
    REQUIRE(!events.empty());
    bool last_was_swallow = false;
    for (const auto& event : events) {
        if (event.kind == EventKind::Swallow) {
            REQUIRE_FALSE(last_was_swallow);
            last_was_swallow = true;
        } else {
            last_was_swallow = false;
        }
    }
}

TEST_CASE("in-meal prompts respect the cooldown on a fast-eating meal") {
    SynthMealSpec spec;
    spec.duration_s = 240.0;
    spec.seed = 17;
    spec.chews_per_swallow_mean = 6.0;  // CPS well under the trigger threshold
    const SynthMeal meal = synth_meal(spec);
    StreamEngine engine(SessionConfig{}, nullptr, nullptr);
    engine.push_samples(meal.samples);
    engine.finish();
    const auto& prompts = engine.session().timeline.prompts;
    REQUIRE(prompts.size() >= 3);  // pre-meal + at least two in-meal
    CHECK(prompts.front().family == PromptFamily::PreMealGoal);
    for (std::size_t i = 2; i < prompts.size(); ++i) {
        CHECK(prompts[i].time_s - prompts[i - 1].time_s >= 30.0);
    }
}

TEST_CASE("summary record aggregates match the generator bookkeeping") {
    SynthMealSpec spec;
    spec.duration_s = 90.0;
    spec.seed = 19;
    const SynthMeal meal = synth_meal(spec);
    std::vector<EventLogRecord> records;
    StreamEngine engine(SessionConfig{}, nullptr,
                        [&](const EventLogRecord& r) { records.push_back(r); });
    engine.push_samples(meal.samples);
    engine.finish();
    REQUIRE(records.back().kind == RecordKind::Summary);
    CHECK(records.back().total_chews == meal.planted_chews);
    CHECK(records.back().total_swallows == meal.planted_swallows);
    const auto& summary = engine.summary();
    CHECK(summary.total_chews == meal.planted_chews);
    REQUIRE(summary.mean_cps.has_value());
    const double expected_cps = static_cast<double>(meal.planted_chews) /
                                static_cast<double>(meal.planted_swallows);
    CHECK(*summary.mean_cps == doctest::Approx(expected_cps).epsilon(1e-9));
}
